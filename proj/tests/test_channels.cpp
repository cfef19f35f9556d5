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
#include <random>

#include <Eigen/Dense>

#include "aqec/channels.hpp"
#include "dense_oracle.hpp"
#include "aqec/slope_fit.hpp"

namespace aqec {
namespace {

using Eigen::VectorXcd;

using testing::dense;
using testing::dense_effect;

SparseStateVector random_state(int m, std::mt19937_64 &rng, int nonzeros) {
    std::uniform_int_distribution<BasisLabel> label(0, label_mask(m));
    std::normal_distribution<double> normal;
    std::vector<SparseStateVector::Entry> entries;
    for (int i = 0; i < nonzeros; ++i) {
        entries.emplace_back(label(rng), Complex(normal(rng), normal(rng)));
    }
    SparseStateVector v(m, entries);
    return v.scaled(1.0 / std::sqrt(v.norm_squared()));
}

TEST(SingleQubitEffects, GammaZeroIsIdentityAndZero) {
    const auto [a0, a1] = single_qubit_ad_effects(0.0);
    EXPECT_TRUE(a0.isApprox(Eigen::Matrix2cd::Identity()));
    EXPECT_EQ(a1.norm(), 0.0);
}

TEST(SingleQubitEffects, GammaOneDecaysFully) {
    const auto [a0, a1] = single_qubit_ad_effects(1.0);
    Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero();
    p0(0, 0) = 1.0;
    Eigen::Matrix2cd lower = Eigen::Matrix2cd::Zero();
    lower(0, 1) = 1.0;
    EXPECT_EQ(a0, p0);
    EXPECT_EQ(a1, lower);
}

TEST(SingleQubitEffects, CompleteAtGenericGamma) {
    const auto [a0, a1] = single_qubit_ad_effects(0.19);
    const Eigen::Matrix2cd sum = a0.adjoint() * a0 + a1.adjoint() * a1;
    EXPECT_LT((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SingleQubitEffects, RejectsGammaOutsideUnitInterval) {
    EXPECT_THROW(single_qubit_ad_effects(-0.1), invalid_input);
    EXPECT_THROW(single_qubit_ad_effects(1.5), invalid_input);
}

TEST(DampingLabel, WeightAndOrderTag) {
    const DampingLabel label{5, from_bit_string("10110")};
    EXPECT_EQ(label.weight(), 3);
    EXPECT_EQ(label.order_tag(), 3);
    EXPECT_EQ(label.to_string(), "10110");
}

TEST(SupportConfig, UnionSize) {
    const SupportConfig config({4, from_bit_string("1100")}, {4, from_bit_string("0110")});
    EXPECT_EQ(config.tau, 3);
}

TEST(ApplyDamping, SingleQubitDecay) {
    const double g = 0.3;
    const auto out = apply_damping({1, 1}, g, SparseStateVector(1, {{1, {1, 0}}}));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out.amplitude(0).real(), std::sqrt(g), 1e-15);
}

TEST(ApplyDamping, NoDecayOnTwoExcitations) {
    const double g = 0.3;
    const auto out = apply_damping({2, 0}, g, SparseStateVector(2, {{3, {1, 0}}}));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out.amplitude(3).real(), 1.0 - g, 1e-15);
}

TEST(ApplyDamping, DickeStateMatchesDenseProduct) {
    const DampingLabel label{2, from_bit_string("10")};
    const auto state = dicke_basis_vector({2, 1});
    const auto out = apply_damping(label, 0.25, state);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out.amplitude(0).real(), std::sqrt(0.25) / std::sqrt(2.0), 1e-15);
    const VectorXcd expected = dense_effect(label, 0.25) * dense(state);
    EXPECT_LT((dense(out) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ApplyDamping, MatchesDenseTensorPowerOnRandomStates) {
    std::mt19937_64 rng(11);
    for (int m = 1; m <= 5; ++m) {
        const auto state = random_state(m, rng, 6);
        for (BasisLabel k = 0; k <= label_mask(m); ++k) {
            const DampingLabel label{m, k};
            const VectorXcd expected = dense_effect(label, 0.37) * dense(state);
            EXPECT_LT((dense(apply_damping(label, 0.37, state)) - expected).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(ApplyDamping, IsLinear) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 6;
        const auto a = random_state(m, rng, 10);
        const auto b = random_state(m, rng, 10);
        const Complex ca(0.3, -1.1);
        const Complex cb(-0.7, 0.4);
        const DampingLabel label{m, static_cast<BasisLabel>(trial % 64)};
        const auto lhs = apply_damping(label, 0.2, a.scaled(ca) + b.scaled(cb));
        const auto rhs = apply_damping(label, 0.2, a).scaled(ca) + apply_damping(label, 0.2, b).scaled(cb);
        EXPECT_LT((dense(lhs) - dense(rhs)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ApplyDamping, FullSetIsTracePreserving) {
    std::mt19937_64 rng(3);
    for (int m = 1; m <= 6; ++m) {
        const auto psi = random_state(m, rng, 12);
        double total = 0.0;
        for (BasisLabel k = 0; k <= label_mask(m); ++k) {
            total += apply_damping({m, k}, 0.41, psi).norm_squared();
        }
        EXPECT_NEAR(total, 1.0, 1e-12) << "m=" << m;
    }
}

TEST(ApplyDamping, RejectsQubitCountMismatch) {
    EXPECT_THROW(apply_damping({2, 0}, 0.1, SparseStateVector(3, {{0, {1, 0}}})), invalid_input);
}

TEST(TruncatedKrausSet, TwoQubitsOrderOne) {
    const auto omega = truncated_kraus_set(2, 1, 0.1);
    ASSERT_EQ(omega.size(), 3u);
    EXPECT_EQ(omega[0].to_string(), "00");
    EXPECT_EQ(omega[1].to_string(), "10");
    EXPECT_EQ(omega[2].to_string(), "01");
}

TEST(TruncatedKrausSet, SizesAndOrdering) {
    EXPECT_EQ(truncated_kraus_set(13, 1, 0.1).size(), 14u);
    const auto omega = truncated_kraus_set(13, 2, 0.1);
    EXPECT_EQ(omega.size(), 92u);
    for (std::size_t i = 1; i < omega.size(); ++i) {
        const auto &a = omega[i - 1];
        const auto &b = omega[i];
        EXPECT_TRUE(a.weight() < b.weight() || (a.weight() == b.weight() && a.k < b.k));
    }
}

TEST(TruncatedKrausSet, RejectsClosedEndpointsAndBadOrder) {
    EXPECT_THROW(truncated_kraus_set(3, 1, 0.0), invalid_input);
    EXPECT_THROW(truncated_kraus_set(3, 1, 1.0), invalid_input);
    EXPECT_THROW(truncated_kraus_set(3, 4, 0.5), invalid_input);
    EXPECT_THROW(truncated_kraus_set(3, -1, 0.5), invalid_input);
}

TEST(TruncationDefect, ZeroWithoutTruncation) {
    const auto code = as_code_space(build_pi_code(1));
    EXPECT_NEAR(truncation_defect(code, truncated_kraus_set(13, 13, 0.3)), 0.0, 1e-15);
}

TEST(TruncationDefect, VanishesAsGammaShrinks) {
    const auto code = as_code_space(build_pi_code(1));
    EXPECT_LT(truncation_defect(code, truncated_kraus_set(13, 0, 1e-9)), 1e-7);
}

TEST(TruncationDefect, MatchesDirectComplementAverage) {
    const PICode pi = build_pi_code(1);
    const auto code = as_code_space(pi);
    const auto omega = truncated_kraus_set(13, 1, 0.05);
    double kept = 0.0;
    for (const auto &label : omega.labels()) {
        for (const auto &cw : code.codewords()) {
            kept += apply_damping(label, omega.gamma(), cw).norm_squared();
        }
    }
    const double direct = 1.0 - kept / 2.0;
    EXPECT_NEAR(truncation_defect(code, omega), direct, 1e-13);
    EXPECT_NEAR(truncation_defect(pi, omega), direct, 1e-13);
}

TEST(TruncationDefect, OrderIsAboveT) {
    const auto code = as_code_space(build_pi_code(1));
    const auto grid = log_spaced_grid(-3.0, -1.0, 9);
    for (int t = 0; t <= 2; ++t) {
        std::vector<double> values;
        for (double g : grid) {
            values.push_back(truncation_defect(code, truncated_kraus_set(13, t, g)));
        }
        const auto fit = fit_log_log(grid, values);
        EXPECT_GE(fit.slope, t + 0.9) << "t=" << t;
    }
}

}  // namespace
}  // namespace aqec
