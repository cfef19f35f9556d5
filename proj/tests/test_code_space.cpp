// Copyright 2026 The aqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "aqec/code_space.hpp"

namespace aqec {
namespace {

Rational q(long long p, long long d) { return Rational(p, d); }

TEST(SparseStateVector, MergesRepeatedLabelsAndDropsZeros) {
    SparseStateVector v(3, {{5, {0.5, 0}}, {1, {1, 0}}, {5, {0.5, 0}}, {2, {0, 0}}});
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v.entries()[0].first, 1u);
    EXPECT_EQ(v.entries()[1].first, 5u);
    EXPECT_DOUBLE_EQ(v.amplitude(5).real(), 1.0);
    EXPECT_EQ(v.amplitude(2), Complex{});
}

TEST(SparseStateVector, RejectsLabelsWiderThanQubitCount) {
    EXPECT_THROW(SparseStateVector(2, {{4, {1, 0}}}), invalid_input);
    EXPECT_THROW(SparseStateVector(0, {}), invalid_input);
}

TEST(SparseStateVector, CancellingSumLeavesNoStoredZero) {
    SparseStateVector a(2, {{1, {1, 0}}, {2, {1, 0}}});
    SparseStateVector b(2, {{1, {-1, 0}}});
    const auto c = a + b;
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.entries()[0].first, 2u);
}

TEST(SparseStateVector, InnerProductIsConjugateLinearInBra) {
    SparseStateVector a(1, {{0, {0, 1}}});
    SparseStateVector b(1, {{0, {1, 0}}});
    EXPECT_EQ(inner_product(a, b), Complex(0, -1));
}

TEST(BitStrings, QubitZeroIsLeftmost) {
    EXPECT_EQ(to_bit_string(1, 3), "100");
    EXPECT_EQ(to_bit_string(6, 3), "011");
    EXPECT_EQ(from_bit_string("100"), 1u);
    EXPECT_EQ(from_bit_string("011"), 6u);
}

TEST(DickeBasisVector, TwoQubitsWeightOne) {
    const auto v = dicke_basis_vector({2, 1});
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(v.amplitude(from_bit_string("01")).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(v.amplitude(from_bit_string("10")).real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(DickeBasisVector, WeightZeroIsAllZerosLabel) {
    const auto v = dicke_basis_vector({3, 0});
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v.amplitude(0), Complex(1.0, 0.0));
}

TEST(DickeBasisVector, ThirteenQubitsWeightSixMatchesEnumeration) {
    const auto v = dicke_basis_vector({13, 6});
    std::set<BasisLabel> expected;
    for (BasisLabel x = 0; x < (1u << 13); ++x) {
        if (std::popcount(x) == 6) {
            expected.insert(x);
        }
    }
    ASSERT_EQ(v.size(), expected.size());
    EXPECT_EQ(v.size(), 1716u);
    for (const auto &[x, amp] : v.entries()) {
        EXPECT_TRUE(expected.contains(x));
        EXPECT_NEAR(amp.real(), 1.0 / std::sqrt(1716.0), 1e-15);
    }
    EXPECT_NEAR(v.norm_squared(), 1.0, 1e-12);
}

TEST(DickeBasisVector, RejectsWeightOutsideRange) {
    EXPECT_THROW(dicke_basis_vector({3, 4}), invalid_input);
    EXPECT_THROW(dicke_basis_vector({3, -1}), invalid_input);
}

TEST(DickeBasisVector, EveryWeightHasBinomialCountAndUnitNorm) {
    for (int m = 1; m <= 10; ++m) {
        for (int a = 0; a <= m; ++a) {
            const auto v = dicke_basis_vector({m, a});
            EXPECT_EQ(static_cast<double>(v.size()), binomial_double(m, a));
            // Squared amplitudes are 1/C(m,a): exact count times that is exactly 1 in rationals.
            EXPECT_EQ(Rational(static_cast<long long>(v.size())) * Rational(BigInt(1), binomial(m, a)), Rational(1));
            EXPECT_NEAR(v.norm_squared(), 1.0, 1e-12);
        }
    }
}

TEST(BuildPICode, OrderOneWeightTable) {
    const PICode code = build_pi_code(1);
    EXPECT_EQ(code.num_qubits(), 13);
    EXPECT_EQ(code.target_order(), 1);
    const PICode::WeightRow row0{{0, q(1, 8)}, {6, q(6, 8)}, {12, q(1, 8)}};
    const PICode::WeightRow row1{{3, q(1, 2)}, {9, q(1, 2)}};
    EXPECT_EQ(code.row(0), row0);
    EXPECT_EQ(code.row(1), row1);
}

TEST(BuildPICode, RowsSumToOneExactly) {
    for (int t = 1; t <= 4; ++t) {
        const PICode code = build_pi_code(t);
        for (int j = 0; j < 2; ++j) {
            Rational total = 0;
            for (const auto &[b, w] : code.row(j)) {
                total += w;
            }
            EXPECT_EQ(total, 1) << "t=" << t << " j=" << j;
        }
    }
}

TEST(BuildPICode, OrderTwoSupportAndWeights) {
    const PICode code = build_pi_code(2);
    EXPECT_EQ(code.num_qubits(), 44);
    for (int i = 0; i <= 7; ++i) {
        const int b = 6 * i;
        EXPECT_EQ(code.weight(i % 2, b), Rational(binomial(7, i), BigInt(64))) << "i=" << i;
        EXPECT_EQ(code.weight(1 - i % 2, b), 0);
    }
}

TEST(BuildPICode, SupportEndsAtMMinusT) {
    for (int t = 1; t <= 5; ++t) {
        const PICode code = build_pi_code(t);
        int top = 0;
        for (int j = 0; j < 2; ++j) {
            for (const auto &[b, w] : code.row(j)) {
                top = std::max(top, b);
                EXPECT_FALSE(code.row(1 - j).contains(b));
            }
        }
        EXPECT_EQ(top, code.num_qubits() - t);
    }
}

TEST(BuildPICode, OddOrderMatchesLiteralSignSelector) {
    for (int t : {1, 3, 5}) {
        const PICode code = build_pi_code(t);
        const int m = code.num_qubits();
        for (int j = 0; j < 2; ++j) {
            for (int b = 0; b <= m; ++b) {
                Rational expected = 0;
                if (b % (3 * t) == 0 && b / (3 * t) <= 3 * t + 1 && (b + j) % 2 == 0) {
                    expected = Rational(binomial(3 * t + 1, b / (3 * t)), BigInt(1) << (3 * t));
                }
                EXPECT_EQ(code.weight(j, b), expected) << "t=" << t << " j=" << j << " b=" << b;
            }
        }
    }
}

TEST(BuildPICode, RejectsNonPositiveOrder) {
    EXPECT_THROW(build_pi_code(0), invalid_input);
    EXPECT_THROW(build_pi_code(-2), invalid_input);
}

TEST(BuildCustomPICode, SingleQubitFullSpace) {
    const PICode code = build_custom_pi_code(1, {PICode::WeightRow{{0, 1}}, PICode::WeightRow{{1, 1}}});
    const auto cs = as_code_space(code);
    EXPECT_EQ(cs.dimension(), 2);
    EXPECT_EQ(cs.num_qubits(), 1);
    EXPECT_EQ(codeword(code, 0).amplitude(0), Complex(1.0, 0.0));
    EXPECT_EQ(codeword(code, 0).size(), 1u);
}

TEST(BuildCustomPICode, RepetitionStylePair) {
    EXPECT_NO_THROW(build_custom_pi_code(4, {PICode::WeightRow{{0, 1}}, PICode::WeightRow{{4, 1}}}));
}

TEST(BuildCustomPICode, RejectsUnnormalizedRow) {
    EXPECT_THROW(build_custom_pi_code(2, {PICode::WeightRow{{0, q(1, 2)}}, PICode::WeightRow{{2, 1}}}),
                 invalid_input);
}

TEST(BuildCustomPICode, RejectsOverlapAndNegativeWeights) {
    EXPECT_THROW(build_custom_pi_code(2, {PICode::WeightRow{{1, 1}}, PICode::WeightRow{{1, 1}}}), invalid_input);
    EXPECT_THROW(
        build_custom_pi_code(2, {PICode::WeightRow{{0, q(3, 2)}, {1, q(-1, 2)}}, PICode::WeightRow{{2, 1}}}),
        invalid_input);
}

TEST(BuildCustomPICode, TargetOrderEnforcesEmptyTail) {
    EXPECT_THROW(build_custom_pi_code(4, {PICode::WeightRow{{0, 1}}, PICode::WeightRow{{4, 1}}}, 1), invalid_input);
}

TEST(Codeword, OrderOneLogicalOneExpansion) {
    const PICode code = build_pi_code(1);
    const auto v = codeword(code, 1);
    EXPECT_EQ(v.size(), 286u + 715u);
    const double a3 = std::sqrt(0.5 / 286.0);
    const double a9 = std::sqrt(0.5 / 715.0);
    for (const auto &[x, amp] : v.entries()) {
        const int w = weight_of(x);
        ASSERT_TRUE(w == 3 || w == 9);
        EXPECT_NEAR(amp.real(), w == 3 ? a3 : a9, 1e-15);
    }
    EXPECT_NEAR(v.norm_squared(), 1.0, 1e-12);
}

TEST(Codeword, LogicalStatesAreExactlyOrthogonal) {
    // Order two (m = 44) is too wide to materialize; disjoint supports are checked there by weight.
    const PICode code = build_pi_code(1);
    EXPECT_EQ(inner_product(codeword(code, 0), codeword(code, 1)), Complex{});
    const PICode wide = build_pi_code(2);
    for (const auto &[b, w] : wide.row(0)) {
        EXPECT_EQ(wide.weight(1, b), Rational(0)) << "b=" << b;
    }
}

TEST(Codeword, RejectsBadLogicalIndex) { EXPECT_THROW(codeword(build_pi_code(1), 2), invalid_input); }

TEST(Codeword, WideCodesAreValidButNotMaterialized) {
    const PICode code = build_pi_code(3);
    EXPECT_EQ(code.num_qubits(), 93);
    EXPECT_THROW(codeword(code, 0), invalid_input);
}

TEST(CodeSpace, OrderOneCodeIsOrthonormal) {
    const auto cs = as_code_space(build_pi_code(1));
    EXPECT_EQ(cs.dimension(), 2);
    EXPECT_EQ(cs.num_qubits(), 13);
    EXPECT_LT(cs.orthonormality_defect(), 1e-12);
}

TEST(CodeSpace, RejectsNonOrthonormalOrTooSmallCodes) {
    SparseStateVector a(1, {{0, {1, 0}}});
    SparseStateVector b(1, {{0, {1, 0}}, {1, {1, 0}}});
    EXPECT_THROW(CodeSpace(1, {a, b}), invalid_input);
    EXPECT_THROW(CodeSpace(1, {a}), invalid_input);
}

TEST(CodeSpace, BasisStateCode) {
    const auto cs = basis_state_code(2, {from_bit_string("10"), from_bit_string("11")});
    EXPECT_EQ(cs.dimension(), 2);
    EXPECT_EQ(cs.codeword(1).amplitude(3), Complex(1.0, 0.0));
}

}  // namespace
}  // namespace aqec
