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

#ifndef AQEC_CHANNELS_HPP
#define AQEC_CHANNELS_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aqec/code_space.hpp"
#include "aqec/errors.hpp"

namespace aqec {

/// Pattern k of the tensor-power effect A_k = A_{k_1} (x) ... (x) A_{k_m}.
/// Bit q set means qubit q loses its excitation.
struct DampingLabel {
    int m = 0;
    BasisLabel k = 0;

    int weight() const { return weight_of(k); }
    /// Leading order of A_k in sqrt(gamma)^2, one per damped qubit.
    int order_tag() const { return weight(); }
    std::string to_string() const { return to_bit_string(k, m); }

    friend bool operator==(const DampingLabel &, const DampingLabel &) = default;
};

/// Pair (k, k') with the size of the union of their supports.
struct SupportConfig {
    DampingLabel k;
    DampingLabel k_prime;
    int tau = 0;

    SupportConfig(DampingLabel a, DampingLabel b) : k(a), k_prime(b), tau(weight_of(a.k | b.k)) {
        if (a.m != b.m) {
            throw invalid_input("support config over different qubit counts");
        }
    }
};

inline void check_damping_parameter_closed(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw invalid_input("damping parameter must lie in [0, 1], got " + std::to_string(gamma));
    }
}

inline void check_damping_parameter_open(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw invalid_input("damping parameter must lie in (0, 1), got " + std::to_string(gamma));
    }
}

/// (A0, A1) with A0 = |0><0| + sqrt(1-gamma)|1><1| and A1 = sqrt(gamma)|0><1|.
inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> single_qubit_ad_effects(double gamma) {
    check_damping_parameter_closed(gamma);
    Eigen::Matrix2cd a0 = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd a1 = Eigen::Matrix2cd::Zero();
    a0(0, 0) = 1.0;
    a0(1, 1) = std::sqrt(1.0 - gamma);
    a1(0, 1) = std::sqrt(gamma);
    return {a0, a1};
}

/// A_k |psi>. Labels with a 0 on a damped qubit vanish; survivors get damped bits cleared,
/// a sqrt(gamma) per damped qubit and a sqrt(1-gamma) per remaining excitation.
inline SparseStateVector apply_damping(const DampingLabel &label, double gamma, const SparseStateVector &state) {
    check_damping_parameter_closed(gamma);
    if (label.m != state.num_qubits()) {
        throw invalid_input("damping label on " + std::to_string(label.m) + " qubits applied to a " +
                            std::to_string(state.num_qubits()) + "-qubit state");
    }
    const double damp_factor = std::pow(gamma, 0.5 * label.weight());
    const double keep = std::sqrt(1.0 - gamma);
    std::vector<double> keep_powers(static_cast<std::size_t>(label.m) + 1, 1.0);
    for (std::size_t i = 1; i < keep_powers.size(); ++i) {
        keep_powers[i] = keep_powers[i - 1] * keep;
    }
    std::vector<SparseStateVector::Entry> out;
    out.reserve(state.size());
    for (const auto &[x, amp] : state.entries()) {
        if ((x & label.k) != label.k) {
            continue;
        }
        // x -> x & ~k is strictly increasing on labels containing k, so order is kept.
        const BasisLabel y = x & ~label.k;
        const Complex value = amp * (damp_factor * keep_powers[static_cast<std::size_t>(weight_of(y))]);
        if (value != Complex{}) {
            out.emplace_back(y, value);
        }
    }
    return SparseStateVector::from_sorted(state.num_qubits(), std::move(out));
}

/// Omega = {A_k : |k| <= t} at damping parameter gamma.
class TruncatedKrausSet {
  public:
    static constexpr std::size_t kMaxLabels = 200000;

    TruncatedKrausSet(int num_qubits, int truncation_order, double gamma)
        : m_(num_qubits), t_(truncation_order), gamma_(gamma) {
        check_damping_parameter_open(gamma);
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw invalid_input("qubit count must be in [1, 64], got " + std::to_string(num_qubits));
        }
        if (truncation_order < 0 || truncation_order > num_qubits) {
            throw invalid_input("truncation order must lie in [0, m], got " + std::to_string(truncation_order));
        }
        double count = 0.0;
        for (int w = 0; w <= t_; ++w) {
            count += binomial_double(m_, w);
        }
        if (count > static_cast<double>(kMaxLabels)) {
            throw invalid_input("truncated Kraus set would hold more than 200000 effects");
        }
        labels_.reserve(static_cast<std::size_t>(count));
        for (int w = 0; w <= t_; ++w) {
            for_each_label_of_weight(m_, w, [&](BasisLabel k) { labels_.push_back({m_, k}); });
        }
    }

    int num_qubits() const { return m_; }
    int truncation_order() const { return t_; }
    double gamma() const { return gamma_; }
    std::size_t size() const { return labels_.size(); }
    const DampingLabel &operator[](std::size_t i) const { return labels_[i]; }
    std::span<const DampingLabel> labels() const { return labels_; }

    TruncatedKrausSet with_gamma(double gamma) const { return TruncatedKrausSet(m_, t_, gamma); }

  private:
    int m_;
    int t_;
    double gamma_;
    std::vector<DampingLabel> labels_;
};

inline TruncatedKrausSet truncated_kraus_set(int m, int t, double gamma) { return TruncatedKrausSet(m, t, gamma); }

/// P(Binomial(n, gamma) > t), summed over the tail for accuracy at small gamma.
inline double binomial_upper_tail(int n, int t, double gamma) {
    double total = 0.0;
    for (int j = t + 1; j <= n; ++j) {
        total += binomial_double(n, j) * std::pow(gamma, j) * std::pow(1.0 - gamma, n - j);
    }
    return total;
}

/// Code-averaged weight of the effects left out of Omega:
/// 1 - (1/M) sum_beta <beta| sum_{A in Omega} A^dag A |beta>.
///
/// A_k^dag A_k is diagonal, so each basis label of weight a contributes the probability that
/// more than t of its a excitations decay.
inline double truncation_defect(const CodeSpace &code, const TruncatedKrausSet &omega) {
    if (code.num_qubits() != omega.num_qubits()) {
        throw invalid_input("code and Kraus set act on different qubit counts");
    }
    std::vector<double> tail(static_cast<std::size_t>(code.num_qubits()) + 1);
    for (int a = 0; a <= code.num_qubits(); ++a) {
        tail[static_cast<std::size_t>(a)] = binomial_upper_tail(a, omega.truncation_order(), omega.gamma());
    }
    double total = 0.0;
    for (const auto &cw : code.codewords()) {
        for (const auto &[x, amp] : cw.entries()) {
            total += std::norm(amp) * tail[static_cast<std::size_t>(weight_of(x))];
        }
    }
    return total / code.dimension();
}

/// Same quantity from the Dicke weights, without expanding codewords.
inline double truncation_defect(const PICode &code, const TruncatedKrausSet &omega) {
    if (code.num_qubits() != omega.num_qubits()) {
        throw invalid_input("code and Kraus set act on different qubit counts");
    }
    double total = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (const auto &[b, w] : code.row(j)) {
            total += to_double(w) * binomial_upper_tail(b, omega.truncation_order(), omega.gamma());
        }
    }
    return total / 2.0;
}

}  // namespace aqec

#endif
