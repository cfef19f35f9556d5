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

#ifndef AQEC_CODE_SPACE_HPP
#define AQEC_CODE_SPACE_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aqec/errors.hpp"
#include "aqec/exact.hpp"

namespace aqec {

using Complex = std::complex<double>;

/// Computational basis label. Bit i holds the state of qubit i.
using BasisLabel = std::uint64_t;

inline constexpr int kMaxQubits = 64;

/// Dicke expansions larger than this are refused; closed-form paths cover bigger codes.
inline constexpr std::size_t kMaxMaterializedLabels = std::size_t{1} << 26;

inline int weight_of(BasisLabel label) { return std::popcount(label); }

/// Qubit 0 is printed leftmost.
inline std::string to_bit_string(BasisLabel label, int num_qubits) {
    std::string out(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 0; q < num_qubits; ++q) {
        if ((label >> q) & 1U) {
            out[static_cast<std::size_t>(q)] = '1';
        }
    }
    return out;
}

/// Parses a bit string with qubit 0 leftmost.
inline BasisLabel from_bit_string(const std::string &bits) {
    if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw invalid_input("bit string length must be in [1, 64]: '" + bits + "'");
    }
    BasisLabel label = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') {
            label |= BasisLabel{1} << q;
        } else if (bits[q] != '0') {
            throw invalid_input("bit string may only contain 0/1: '" + bits + "'");
        }
    }
    return label;
}

inline BasisLabel label_mask(int num_qubits) {
    return num_qubits >= 64 ? ~BasisLabel{0} : (BasisLabel{1} << num_qubits) - 1;
}

/// Calls fn(label) for every m-bit label of Hamming weight a, in ascending order.
template <typename Fn>
void for_each_label_of_weight(int num_qubits, int weight, Fn &&fn) {
    if (weight < 0 || weight > num_qubits) {
        return;
    }
    if (weight == 0) {
        fn(BasisLabel{0});
        return;
    }
    BasisLabel label = (weight == 64) ? ~BasisLabel{0} : (BasisLabel{1} << weight) - 1;
    const BasisLabel limit = label_mask(num_qubits);
    while (true) {
        fn(label);
        // Gosper's hack: next larger integer with the same popcount.
        const BasisLabel lowest = label & (~label + 1);
        const BasisLabel ripple = label + lowest;
        if (ripple == 0) {
            return;
        }
        const BasisLabel next = (((ripple ^ label) >> 2) / lowest) | ripple;
        if (next > limit || next < label) {
            return;
        }
        label = next;
    }
}

/// State vector stored as a flat map from basis label to amplitude, sorted by label.
class SparseStateVector {
  public:
    using Entry = std::pair<BasisLabel, Complex>;

    SparseStateVector() = default;

    /// Sorts, merges repeated labels, drops exact zeros. Rejects labels wider than num_qubits.
    SparseStateVector(int num_qubits, std::vector<Entry> entries) : num_qubits_(num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw invalid_input("qubit count must be in [1, 64], got " + std::to_string(num_qubits));
        }
        const BasisLabel mask = label_mask(num_qubits);
        for (const auto &[label, amp] : entries) {
            if ((label & ~mask) != 0) {
                throw invalid_input("basis label " + std::to_string(label) + " exceeds " +
                                    std::to_string(num_qubits) + " qubits");
            }
        }
        std::sort(entries.begin(), entries.end(),
                  [](const Entry &a, const Entry &b) { return a.first < b.first; });
        entries_.reserve(entries.size());
        for (const auto &entry : entries) {
            if (!entries_.empty() && entries_.back().first == entry.first) {
                entries_.back().second += entry.second;
            } else {
                entries_.push_back(entry);
            }
        }
        std::erase_if(entries_, [](const Entry &e) { return e.second == Complex{}; });
    }

    /// Caller guarantees strictly ascending labels, all nonzero amplitudes, all within num_qubits.
    static SparseStateVector from_sorted(int num_qubits, std::vector<Entry> entries) {
        SparseStateVector out;
        out.num_qubits_ = num_qubits;
        out.entries_ = std::move(entries);
        return out;
    }

    int num_qubits() const { return num_qubits_; }
    std::span<const Entry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    Complex amplitude(BasisLabel label) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), label,
                                   [](const Entry &e, BasisLabel l) { return e.first < l; });
        return (it != entries_.end() && it->first == label) ? it->second : Complex{};
    }

    double norm_squared() const {
        double total = 0.0;
        for (const auto &entry : entries_) {
            total += std::norm(entry.second);
        }
        return total;
    }

    SparseStateVector scaled(Complex factor) const {
        if (factor == Complex{}) {
            return from_sorted(num_qubits_, {});
        }
        auto entries = entries_;
        for (auto &entry : entries) {
            entry.second *= factor;
        }
        std::erase_if(entries, [](const Entry &e) { return e.second == Complex{}; });
        return from_sorted(num_qubits_, std::move(entries));
    }

    friend SparseStateVector operator+(const SparseStateVector &a, const SparseStateVector &b) {
        if (a.num_qubits_ != b.num_qubits_) {
            throw invalid_input("cannot add states over different qubit counts");
        }
        std::vector<Entry> merged;
        merged.reserve(a.size() + b.size());
        auto ia = a.entries_.begin();
        auto ib = b.entries_.begin();
        while (ia != a.entries_.end() || ib != b.entries_.end()) {
            if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->first < ib->first)) {
                merged.push_back(*ia++);
            } else if (ia == a.entries_.end() || ib->first < ia->first) {
                merged.push_back(*ib++);
            } else {
                Complex sum = ia->second + ib->second;
                if (sum != Complex{}) {
                    merged.emplace_back(ia->first, sum);
                }
                ++ia;
                ++ib;
            }
        }
        return from_sorted(a.num_qubits_, std::move(merged));
    }

  private:
    int num_qubits_ = 0;
    std::vector<Entry> entries_;
};

/// <bra|ket>, conjugate-linear in the bra.
inline Complex inner_product(const SparseStateVector &bra, const SparseStateVector &ket) {
    if (bra.num_qubits() != ket.num_qubits()) {
        throw invalid_input("inner product of states over different qubit counts");
    }
    Complex total{};
    auto a = bra.entries();
    auto b = ket.entries();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (b[j].first < a[i].first) {
            ++j;
        } else {
            total += std::conj(a[i].second) * b[j].second;
            ++i;
            ++j;
        }
    }
    return total;
}

struct DickeLabel {
    int m = 0;
    int a = 0;
};

/// Uniform superposition of all weight-a labels on m qubits.
inline SparseStateVector dicke_basis_vector(DickeLabel label) {
    if (label.m < 1 || label.m > kMaxQubits) {
        throw invalid_input("Dicke state qubit count must be in [1, 64], got " + std::to_string(label.m));
    }
    if (label.a < 0 || label.a > label.m) {
        throw invalid_input("Dicke weight " + std::to_string(label.a) + " outside [0, " +
                            std::to_string(label.m) + "]");
    }
    const double count = binomial_double(label.m, label.a);
    if (count > static_cast<double>(kMaxMaterializedLabels)) {
        throw invalid_input("Dicke state |P_{" + std::to_string(label.m) + "," + std::to_string(label.a) +
                            "}> has too many labels to materialize");
    }
    const Complex amp(1.0 / std::sqrt(count), 0.0);
    std::vector<SparseStateVector::Entry> entries;
    entries.reserve(static_cast<std::size_t>(count));
    for_each_label_of_weight(label.m, label.a, [&](BasisLabel x) { entries.emplace_back(x, amp); });
    return SparseStateVector::from_sorted(label.m, std::move(entries));
}

/// Permutation-invariant two-codeword code |j_L> = sum_b sqrt(weight(j, b)) |P_{m,b}>.
///
/// The qubit count is not limited by the label width; only expansion into basis labels is.
/// Weights are exact rationals. Only nonzero weights are stored. `target_order` is the
/// number of damping events the code is designed for; zero marks a custom code with no
/// design target, for which the upper-tail condition is not enforced.
class PICode {
  public:
    using WeightRow = std::map<int, Rational>;

    PICode(int num_qubits, int target_order, std::array<WeightRow, 2> weights)
        : m_(num_qubits), t_(target_order), weights_(std::move(weights)) {
        validate();
    }

    int num_qubits() const { return m_; }
    int target_order() const { return t_; }
    const WeightRow &row(int j) const { return weights_.at(static_cast<std::size_t>(check_logical(j))); }

    Rational weight(int j, int b) const {
        const auto &r = row(j);
        auto it = r.find(b);
        return it == r.end() ? Rational(0) : it->second;
    }

    /// Dense double weights indexed by b in [0, m].
    std::vector<double> weights_as_double(int j) const {
        std::vector<double> out(static_cast<std::size_t>(m_) + 1, 0.0);
        for (const auto &[b, w] : row(j)) {
            out[static_cast<std::size_t>(b)] = to_double(w);
        }
        return out;
    }

    friend bool operator==(const PICode &, const PICode &) = default;

  private:
    static int check_logical(int j) {
        if (j != 0 && j != 1) {
            throw invalid_input("logical index must be 0 or 1, got " + std::to_string(j));
        }
        return j;
    }

    void validate() {
        if (m_ < 1) {
            throw invalid_input("PI code qubit count must be positive, got " + std::to_string(m_));
        }
        if (t_ < 0) {
            throw invalid_input("target order must be non-negative, got " + std::to_string(t_));
        }
        for (int j = 0; j < 2; ++j) {
            auto &r = weights_[static_cast<std::size_t>(j)];
            std::erase_if(r, [](const auto &kv) { return kv.second == 0; });
            Rational total = 0;
            for (const auto &[b, w] : r) {
                if (b < 0 || b > m_) {
                    throw invalid_input("weight index b=" + std::to_string(b) + " outside [0, " +
                                        std::to_string(m_) + "]");
                }
                if (w < 0) {
                    throw invalid_input("negative weight at j=" + std::to_string(j) + ", b=" + std::to_string(b));
                }
                if (t_ > 0 && b > m_ - t_) {
                    throw invalid_input("weight at j=" + std::to_string(j) + ", b=" + std::to_string(b) +
                                        " lies in the excluded tail (m-t, m]");
                }
                total += w;
            }
            if (total != 1) {
                throw invalid_input("weight row j=" + std::to_string(j) + " is not normalized (sum = " +
                                    to_fraction_string(total) + ")");
            }
        }
        for (const auto &[b, w] : weights_[0]) {
            if (weights_[1].contains(b)) {
                throw invalid_input("logical supports overlap at b=" + std::to_string(b));
            }
        }
    }

    int m_;
    int t_;
    std::array<WeightRow, 2> weights_;
};

/// The permutation-invariant t-AD family on m = 9t^2 + 4t qubits.
///
/// Support sits on b = 3t*i for i in [0, 3t+1] with weight C(3t+1, i) / 2^{3t}. Codeword j
/// takes the i with i = j (mod 2). For odd t this is the (-1)^{b+j} selector value for value;
/// for even t that selector would empty the j=1 row.
inline PICode build_pi_code(int t) {
    if (t < 1) {
        throw invalid_input("target order t must be >= 1, got " + std::to_string(t));
    }
    if (t > 1000) {
        throw invalid_input("target order t=" + std::to_string(t) + " is unreasonably large");
    }
    const int m = 9 * t * t + 4 * t;
    const int spacing = 3 * t;
    const BigInt denominator = BigInt(1) << spacing;
    std::array<PICode::WeightRow, 2> weights;
    for (int i = 0; i <= spacing + 1; ++i) {
        weights[static_cast<std::size_t>(i % 2)][spacing * i] = Rational(binomial(spacing + 1, i), denominator);
    }
    return PICode(m, t, std::move(weights));
}

inline PICode build_custom_pi_code(int m, std::array<PICode::WeightRow, 2> weights, int target_order = 0) {
    return PICode(m, target_order, std::move(weights));
}

/// Expands |j_L> over computational basis labels.
inline SparseStateVector codeword(const PICode &code, int j) {
    const int m = code.num_qubits();
    if (m > kMaxQubits) {
        throw invalid_input("codeword on " + std::to_string(m) + " qubits exceeds the 64-bit label width");
    }
    std::size_t total = 0;
    for (const auto &[b, w] : code.row(j)) {
        total += static_cast<std::size_t>(binomial_double(m, b));
        if (total > kMaxMaterializedLabels) {
            throw invalid_input("codeword on " + std::to_string(m) + " qubits has too many labels to materialize");
        }
    }
    std::vector<SparseStateVector::Entry> entries;
    entries.reserve(total);
    for (const auto &[b, w] : code.row(j)) {
        const Complex amp(std::sqrt(to_double(w) / binomial_double(m, b)), 0.0);
        for_each_label_of_weight(m, b, [&](BasisLabel x) { entries.emplace_back(x, amp); });
    }
    std::sort(entries.begin(), entries.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    return SparseStateVector::from_sorted(m, std::move(entries));
}

/// Orthonormal codeword set over m qubits. Projector is sum_beta |beta><beta|.
class CodeSpace {
  public:
    static constexpr double kOrthonormalityTolerance = 1e-12;

    CodeSpace(int num_qubits, std::vector<SparseStateVector> codewords)
        : m_(num_qubits), codewords_(std::move(codewords)) {
        if (codewords_.size() < 2) {
            throw invalid_input("a code needs at least 2 codewords, got " + std::to_string(codewords_.size()));
        }
        for (const auto &cw : codewords_) {
            if (cw.num_qubits() != m_) {
                throw invalid_input("codeword qubit count does not match code qubit count");
            }
        }
        const double defect = orthonormality_defect();
        if (!(defect <= kOrthonormalityTolerance)) {
            throw invalid_input("codewords are not orthonormal (defect " + std::to_string(defect) + ")");
        }
    }

    int num_qubits() const { return m_; }
    int dimension() const { return static_cast<int>(codewords_.size()); }
    const SparseStateVector &codeword(int i) const { return codewords_.at(static_cast<std::size_t>(i)); }
    std::span<const SparseStateVector> codewords() const { return codewords_; }

    /// max |<a|b> - delta_ab| over codeword pairs.
    double orthonormality_defect() const {
        double worst = 0.0;
        for (std::size_t a = 0; a < codewords_.size(); ++a) {
            for (std::size_t b = a; b < codewords_.size(); ++b) {
                Complex ip = inner_product(codewords_[a], codewords_[b]);
                if (a == b) {
                    ip -= 1.0;
                }
                worst = std::max(worst, std::abs(ip));
            }
        }
        return worst;
    }

  private:
    int m_;
    std::vector<SparseStateVector> codewords_;
};

inline CodeSpace as_code_space(const PICode &code) {
    return CodeSpace(code.num_qubits(), {codeword(code, 0), codeword(code, 1)});
}

/// Code spanned by computational basis states.
inline CodeSpace basis_state_code(int num_qubits, const std::vector<BasisLabel> &labels) {
    std::vector<SparseStateVector> codewords;
    codewords.reserve(labels.size());
    for (BasisLabel x : labels) {
        codewords.emplace_back(num_qubits, std::vector<SparseStateVector::Entry>{{x, Complex(1.0, 0.0)}});
    }
    return CodeSpace(num_qubits, std::move(codewords));
}

}  // namespace aqec

#endif
