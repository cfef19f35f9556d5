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

#ifndef AQEC_PI_AD_CODES_HPP
#define AQEC_PI_AD_CODES_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aqec/channels.hpp"
#include "aqec/code_space.hpp"
#include "aqec/errors.hpp"
#include "aqec/exact.hpp"

namespace aqec {

// Closed-form matrix elements
// ---------------------------
//
// For damping patterns k, k' of weights w, w' whose supports cover tau qubits,
//
//   <j'_L| A_k^dag A_k' |j_L> = sum_b sqrt(lam[j'][b + w - w'] lam[j][b]
//                                          / (C(m, b + w - w') C(m, b)))
//                               * gamma^{(w + w')/2} (1 - gamma)^{b - w'} C(m - tau, b - w').
//
// A_k' removes w' excitations from the ket and A_k removes w from the bra, so the bra
// weight is b + w - w'. Written with the operator order A_k'^dag A_k this is the same
// expression with w and w' exchanged. The sparse-application tests pin this convention.

/// Evaluates closed-form elements for one code at one gamma.
class PIElementEvaluator {
  public:
    PIElementEvaluator(const PICode &code, double gamma)
        : m_(code.num_qubits()), gamma_(gamma), binomials_(code.num_qubits()),
          lambda_{code.weights_as_double(0), code.weights_as_double(1)} {
        check_damping_parameter_closed(gamma);
        keep_powers_.assign(static_cast<std::size_t>(m_) + 1, 1.0);
        damp_half_powers_.assign(2 * static_cast<std::size_t>(m_) + 1, 1.0);
        const double sqrt_gamma = std::sqrt(gamma);
        for (std::size_t i = 1; i < keep_powers_.size(); ++i) {
            keep_powers_[i] = keep_powers_[i - 1] * (1.0 - gamma);
        }
        for (std::size_t i = 1; i < damp_half_powers_.size(); ++i) {
            damp_half_powers_[i] = damp_half_powers_[i - 1] * sqrt_gamma;
        }
        for (int j = 0; j < 2; ++j) {
            for (int b = 0; b <= m_; ++b) {
                const double lam = lambda_[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)];
                if (lam > 0.0) {
                    support_[static_cast<std::size_t>(j)].push_back(b);
                }
            }
        }
    }

    int num_qubits() const { return m_; }
    double gamma() const { return gamma_; }

    /// <j_out| A_k^dag A_k' |j_in> for |k| = weight_bra, |k'| = weight_ket.
    double element(int weight_bra, int weight_ket, int tau, int j_out, int j_in) const {
        check_support_config(weight_bra, weight_ket, tau);
        const auto &lam_in = lambda_.at(static_cast<std::size_t>(j_in));
        const auto &lam_out = lambda_.at(static_cast<std::size_t>(j_out));
        const int shift = weight_bra - weight_ket;
        double total = 0.0;
        for (int b : support_[static_cast<std::size_t>(j_in)]) {
            const int b_out = b + shift;
            const int free_ones = b - weight_ket;
            if (b_out < 0 || b_out > m_ || free_ones < 0 || free_ones > m_ - tau) {
                continue;
            }
            const double lam_product = lam_out[static_cast<std::size_t>(b_out)] * lam_in[static_cast<std::size_t>(b)];
            if (lam_product == 0.0) {
                continue;
            }
            total += std::sqrt(lam_product / (binomials_(m_, b_out) * binomials_(m_, b))) *
                     binomials_(m_ - tau, free_ones) * keep_powers_[static_cast<std::size_t>(free_ones)];
        }
        return total * damp_half_powers_[static_cast<std::size_t>(weight_bra + weight_ket)];
    }

    void check_support_config(int weight_bra, int weight_ket, int tau) const {
        if (weight_bra < 0 || weight_ket < 0 || weight_bra > m_ || weight_ket > m_) {
            throw invalid_input("damping weights outside [0, m]");
        }
        if (tau < std::max(weight_bra, weight_ket) || tau > std::min(weight_bra + weight_ket, m_)) {
            throw invalid_input("support union size tau=" + std::to_string(tau) + " inconsistent with weights " +
                                std::to_string(weight_bra) + ", " + std::to_string(weight_ket));
        }
    }

  private:
    int m_;
    double gamma_;
    BinomialTable binomials_;
    std::array<std::vector<double>, 2> lambda_;
    std::array<std::vector<int>, 2> support_;
    std::vector<double> keep_powers_;
    std::vector<double> damp_half_powers_;
};

/// <j_out| A_k^dag A_k' |j_in> by the closed form, from weights and support-union size.
inline double pi_matrix_element(const PICode &code, int weight_k, int weight_k_prime, int tau, int j_out, int j_in,
                                double gamma) {
    return PIElementEvaluator(code, gamma).element(weight_k, weight_k_prime, tau, j_out, j_in);
}

inline double pi_matrix_element(const PICode &code, const SupportConfig &config, int j_out, int j_in, double gamma) {
    if (config.k.m != code.num_qubits()) {
        throw invalid_input("damping labels and code act on different qubit counts");
    }
    return pi_matrix_element(code, config.k.weight(), config.k_prime.weight(), config.tau, j_out, j_in, gamma);
}

// Exact certificates
// ------------------

/// sum_b lam[j][b] C(m - b, c) C(b, l) for j in {0,1}, c in [0, t], l in [0, 2t].
class MomentTable {
  public:
    MomentTable(const PICode &code, int t) : t_(t) {
        if (t < 1) {
            throw invalid_input("moment table order must be >= 1, got " + std::to_string(t));
        }
        const int m = code.num_qubits();
        for (int j = 0; j < 2; ++j) {
            auto &rows = moments_[static_cast<std::size_t>(j)];
            rows.assign(static_cast<std::size_t>(t + 1), std::vector<Rational>(static_cast<std::size_t>(2 * t + 1)));
            for (int c = 0; c <= t; ++c) {
                for (int l = 0; l <= 2 * t; ++l) {
                    Rational sum = 0;
                    for (const auto &[b, w] : code.row(j)) {
                        sum += w * Rational(binomial(m - b, c) * binomial(b, l));
                    }
                    rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(l)] = sum;
                }
            }
        }
    }

    int order() const { return t_; }
    const Rational &operator()(int j, int c, int l) const {
        return moments_.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(c)).at(static_cast<std::size_t>(l));
    }

  private:
    int t_;
    std::array<std::vector<std::vector<Rational>>, 2> moments_;
};

struct Lemma4Certificate {
    MomentTable moments;
    bool moments_equal = false;
    bool tail_empty = false;
    /// First (c, l) in row-major order where the two rows differ.
    std::optional<std::pair<int, int>> first_violation;

    bool certified() const { return moments_equal && tail_empty; }
};

/// Exact check of the moment equalities and the empty upper tail (m - t, m].
inline Lemma4Certificate lemma4_certify(const PICode &code, int t) {
    Lemma4Certificate cert{MomentTable(code, t), false, false, std::nullopt};
    cert.moments_equal = true;
    for (int c = 0; c <= t && cert.moments_equal; ++c) {
        for (int l = 0; l <= 2 * t; ++l) {
            if (cert.moments(0, c, l) != cert.moments(1, c, l)) {
                cert.moments_equal = false;
                cert.first_violation = std::make_pair(c, l);
                break;
            }
        }
    }
    cert.tail_empty = code.num_qubits() > t;
    for (int j = 0; j < 2; ++j) {
        for (const auto &[b, w] : code.row(j)) {
            if (b > code.num_qubits() - t) {
                cert.tail_empty = false;
            }
        }
    }
    return cert;
}

/// sum_{i=0}^{n} C(n, i) i^alpha (-1)^i, with 0^0 = 1.
inline BigInt lemma5_identity(int n, int alpha) {
    if (n < 0 || alpha < 0) {
        throw invalid_input("alternating binomial sum needs n, alpha >= 0");
    }
    BigInt total = 0;
    for (int i = 0; i <= n; ++i) {
        BigInt term = binomial(n, i) * boost::multiprecision::pow(BigInt(i), static_cast<unsigned>(alpha));
        if (i % 2 == 0) {
            total += term;
        } else {
            total -= term;
        }
    }
    return total;
}

struct BinomialRatio {
    Rational lhs;
    Rational rhs_corrected;
    Rational rhs_printed;
};

/// C(m-k-c, b-k) / C(m, b) three ways. The corrected right side is
/// C(b, k) C(m-b, c) / (C(m, k+c) C(k+c, c)); the printed one is
/// C(b, k) / C(m, k-c) * C(m-b, c) C(k, c) (c!)^2 and only agrees when c = 0.
inline BinomialRatio binomial_ratio_identity(int m, int k, int c, int b) {
    if (c < 0 || c > k || k > b || b > m - c) {
        throw invalid_input("binomial ratio needs 0 <= c <= k <= b <= m - c");
    }
    BinomialRatio out;
    out.lhs = Rational(binomial(m - k - c, b - k), binomial(m, b));
    out.rhs_corrected = Rational(binomial(b, k) * binomial(m - b, c), binomial(m, k + c) * binomial(k + c, c));
    const BigInt c_factorial = factorial(c);
    out.rhs_printed =
        Rational(binomial(b, k), binomial(m, k - c)) * Rational(binomial(m - b, c) * binomial(k, c) * c_factorial * c_factorial);
    return out;
}

struct Lemma5Summary {
    int max_n = 0;
    long long checked = 0;
    long long failures = 0;
    long long boundary_failures = 0;
};

/// Zero for all 1 <= n <= max_n and alpha <= n - 1; (-1)^n n! at alpha = n.
inline Lemma5Summary verify_lemma5_range(int max_n) {
    Lemma5Summary summary{max_n};
    for (int n = 1; n <= max_n; ++n) {
        for (int alpha = 0; alpha < n; ++alpha) {
            ++summary.checked;
            if (lemma5_identity(n, alpha) != 0) {
                ++summary.failures;
            }
        }
        BigInt expected = factorial(n);
        if (n % 2 == 1) {
            expected = -expected;
        }
        if (lemma5_identity(n, n) != expected) {
            ++summary.boundary_failures;
        }
    }
    return summary;
}

struct BinomialRatioSummary {
    int max_m = 0;
    long long checked = 0;
    long long corrected_failures = 0;
    long long printed_disagreements = 0;
    long long printed_disagreements_c0 = 0;
};

/// Every tuple 0 <= c <= k <= b <= m - c with m <= max_m.
inline BinomialRatioSummary verify_binomial_ratio_range(int max_m) {
    BinomialRatioSummary summary{max_m};
    for (int m = 0; m <= max_m; ++m) {
        for (int c = 0; 2 * c <= m; ++c) {
            for (int k = c; k <= m - c; ++k) {
                for (int b = k; b <= m - c; ++b) {
                    const auto r = binomial_ratio_identity(m, k, c, b);
                    ++summary.checked;
                    if (r.lhs != r.rhs_corrected) {
                        ++summary.corrected_failures;
                    }
                    if (r.lhs != r.rhs_printed) {
                        ++summary.printed_disagreements;
                        if (c == 0) {
                            ++summary.printed_disagreements_c0;
                        }
                    }
                }
            }
        }
    }
    return summary;
}

/// Exact: <0_L| A_k^dag A_k' |1_L> = 0 for every pair with |k|, |k'| <= t (equal weights
/// included). All closed-form terms are non-negative, so the sum vanishes iff every term
/// does, i.e. iff no ket level b of row 1 meets a bra level b + |k| - |k'| of row 0.
inline bool cross_terms_zero(const PICode &code, int t) {
    const int m = code.num_qubits();
    const int top = std::min(t, m);
    for (int w_bra = 0; w_bra <= top; ++w_bra) {
        for (int w_ket = 0; w_ket <= top; ++w_ket) {
            for (int tau = std::max(w_bra, w_ket); tau <= std::min(w_bra + w_ket, m); ++tau) {
                for (const auto &[b, lam_in] : code.row(1)) {
                    const int free_ones = b - w_ket;
                    if (free_ones < 0 || free_ones > m - tau) {
                        continue;
                    }
                    if (code.weight(0, b + w_bra - w_ket) != 0) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

}  // namespace aqec

#endif
