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

#ifndef AQEC_PERTURBED_KL_HPP
#define AQEC_PERTURBED_KL_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "aqec/channels.hpp"
#include "aqec/code_space.hpp"
#include "aqec/errors.hpp"
#include "aqec/linalg.hpp"
#include "aqec/pi_ad_codes.hpp"
#include "aqec/slope_fit.hpp"

namespace aqec {

/// Entries <alpha| A^dag B |beta> for effects A, B and codewords alpha, beta.
///
/// Stored as M^2 slices, one |Omega| x |Omega| matrix (A, B) per codeword pair.
class GramBlockTable {
  public:
    GramBlockTable(int num_qubits, int code_dimension, double gamma, std::vector<MatrixXcd> slices)
        : m_(num_qubits), dim_(code_dimension), gamma_(gamma), slices_(std::move(slices)) {
        if (dim_ < 1 || slices_.size() != static_cast<std::size_t>(dim_ * dim_)) {
            throw invalid_input("Gram table needs M^2 slices");
        }
        for (const auto &s : slices_) {
            if (s.rows() != slices_[0].rows() || s.cols() != slices_[0].rows()) {
                throw invalid_input("Gram table slices must be square and equally sized");
            }
        }
    }

    int num_qubits() const { return m_; }
    int code_dimension() const { return dim_; }
    double gamma() const { return gamma_; }
    std::size_t num_effects() const { return static_cast<std::size_t>(slices_[0].rows()); }

    /// (A, B) matrix for fixed (alpha, beta).
    const MatrixXcd &slice(int alpha, int beta) const { return slices_.at(static_cast<std::size_t>(alpha * dim_ + beta)); }

    Complex entry(std::size_t a, std::size_t b, int alpha, int beta) const {
        return slice(alpha, beta)(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }

    /// M x M block Pi A^dag B Pi in the codeword basis.
    MatrixXcd code_block(std::size_t a, std::size_t b) const {
        MatrixXcd out(dim_, dim_);
        for (int alpha = 0; alpha < dim_; ++alpha) {
            for (int beta = 0; beta < dim_; ++beta) {
                out(alpha, beta) = entry(a, b, alpha, beta);
            }
        }
        return out;
    }

    /// max |T(A,B,alpha,beta) - conj(T(B,A,beta,alpha))|.
    double conjugate_symmetry_defect() const {
        double worst = 0.0;
        for (int alpha = 0; alpha < dim_; ++alpha) {
            for (int beta = 0; beta < dim_; ++beta) {
                worst = std::max(worst, (slice(alpha, beta) - slice(beta, alpha).adjoint()).cwiseAbs().maxCoeff());
            }
        }
        return worst;
    }

    /// Table of the effects A~ = sum_F mixing(A, F) F: every slice becomes conj(C) T C^T.
    GramBlockTable transformed(const MatrixXcd &mixing) const {
        if (mixing.cols() != static_cast<Eigen::Index>(num_effects())) {
            throw invalid_input("mixing matrix width must equal the number of effects");
        }
        std::vector<MatrixXcd> out;
        out.reserve(slices_.size());
        const MatrixXcd left = mixing.conjugate();
        const MatrixXcd right = mixing.transpose();
        for (const auto &s : slices_) {
            out.push_back(left * s * right);
        }
        return GramBlockTable(m_, dim_, gamma_, std::move(out));
    }

    friend double max_entry_difference(const GramBlockTable &a, const GramBlockTable &b) {
        if (a.dim_ != b.dim_ || a.num_effects() != b.num_effects()) {
            throw invalid_input("comparing Gram tables of different shapes");
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < a.slices_.size(); ++i) {
            worst = std::max(worst, (a.slices_[i] - b.slices_[i]).cwiseAbs().maxCoeff());
        }
        return worst;
    }

  private:
    int m_;
    int dim_;
    double gamma_;
    std::vector<MatrixXcd> slices_;
};

enum class GramPath { oracle, closed_form };

/// Sparse application of every effect to every codeword, then inner products.
inline GramBlockTable gram_blocks(const CodeSpace &code, const TruncatedKrausSet &omega,
                                  GramPath path = GramPath::oracle) {
    if (path == GramPath::closed_form) {
        throw invalid_input("closed-form Gram blocks need a permutation-invariant code");
    }
    if (code.num_qubits() != omega.num_qubits()) {
        throw invalid_input("code and Kraus set act on different qubit counts");
    }
    const int dim = code.dimension();
    const auto n = static_cast<Eigen::Index>(omega.size());
    std::vector<std::vector<SparseStateVector>> images(omega.size());
    for (std::size_t a = 0; a < omega.size(); ++a) {
        for (const auto &cw : code.codewords()) {
            images[a].push_back(apply_damping(omega[a], omega.gamma(), cw));
        }
    }
    std::vector<MatrixXcd> slices(static_cast<std::size_t>(dim * dim), MatrixXcd::Zero(n, n));
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            for (int alpha = 0; alpha < dim; ++alpha) {
                for (int beta = 0; beta < dim; ++beta) {
                    slices[static_cast<std::size_t>(alpha * dim + beta)](a, b) =
                        inner_product(images[static_cast<std::size_t>(a)][static_cast<std::size_t>(alpha)],
                                      images[static_cast<std::size_t>(b)][static_cast<std::size_t>(beta)]);
                }
            }
        }
    }
    return GramBlockTable(code.num_qubits(), dim, omega.gamma(), std::move(slices));
}

/// Closed-form path groups pairs by (|k|, |k'|, tau); the oracle path expands the codewords.
inline GramBlockTable gram_blocks(const PICode &code, const TruncatedKrausSet &omega,
                                  GramPath path = GramPath::closed_form) {
    if (path == GramPath::oracle) {
        return gram_blocks(as_code_space(code), omega, GramPath::oracle);
    }
    if (code.num_qubits() != omega.num_qubits()) {
        throw invalid_input("code and Kraus set act on different qubit counts");
    }
    const PIElementEvaluator evaluator(code, omega.gamma());
    const auto n = static_cast<Eigen::Index>(omega.size());
    std::vector<MatrixXcd> slices(4, MatrixXcd::Zero(n, n));
    std::map<std::tuple<int, int, int>, std::array<double, 4>> cache;
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto &ka = omega[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < n; ++b) {
            const auto &kb = omega[static_cast<std::size_t>(b)];
            const auto key = std::make_tuple(ka.weight(), kb.weight(), weight_of(ka.k | kb.k));
            auto it = cache.find(key);
            if (it == cache.end()) {
                std::array<double, 4> values{};
                for (int alpha = 0; alpha < 2; ++alpha) {
                    for (int beta = 0; beta < 2; ++beta) {
                        values[static_cast<std::size_t>(alpha * 2 + beta)] =
                            evaluator.element(std::get<0>(key), std::get<1>(key), std::get<2>(key), alpha, beta);
                    }
                }
                it = cache.emplace(key, values).first;
            }
            for (std::size_t s = 0; s < 4; ++s) {
                slices[s](a, b) = it->second[s];
            }
        }
    }
    return GramBlockTable(code.num_qubits(), 2, omega.gamma(), std::move(slices));
}

/// Perturbed Knill-Laflamme data of a Gram table.
struct KLReport {
    double gamma = 0.0;
    int code_dimension = 0;
    std::size_t num_effects = 0;
    /// g(A, B) = (1/M) sum_beta <beta|A^dag B|beta>, which is also the matrix G.
    MatrixXcd G;
    /// eps(A, B, alpha, beta) = <alpha|A^dag B|beta> - g(A, B) delta, same layout as the table.
    std::vector<MatrixXcd> eps_slices;
    /// Smallest eps with |g - <a|A^dag B|a>| <= eps and |<a|A^dag B|b>| <= eps for a != b.
    double eps_max = 0.0;
    double eps_diagonal_max = 0.0;
    double eps_off_diagonal_max = 0.0;
    VectorXd spectrum;
    double lambda_min_G = 0.0;
    double trace_G = 0.0;

    const MatrixXcd &eps_slice(int alpha, int beta) const {
        return eps_slices.at(static_cast<std::size_t>(alpha * code_dimension + beta));
    }

    /// max over (A, B) of |(1/M) sum_alpha eps(A, B, alpha, alpha)|.
    double eps_row_sum_defect() const {
        MatrixXcd sum = MatrixXcd::Zero(G.rows(), G.cols());
        for (int alpha = 0; alpha < code_dimension; ++alpha) {
            sum += eps_slice(alpha, alpha);
        }
        return sum.size() ? sum.cwiseAbs().maxCoeff() / code_dimension : 0.0;
    }
};

inline KLReport kl_perturbation(const GramBlockTable &table) {
    KLReport report;
    const int dim = table.code_dimension();
    report.gamma = table.gamma();
    report.code_dimension = dim;
    report.num_effects = table.num_effects();
    const auto n = static_cast<Eigen::Index>(table.num_effects());
    report.G = MatrixXcd::Zero(n, n);
    for (int beta = 0; beta < dim; ++beta) {
        report.G += table.slice(beta, beta);
    }
    report.G /= static_cast<double>(dim);
    report.eps_slices.reserve(static_cast<std::size_t>(dim * dim));
    for (int alpha = 0; alpha < dim; ++alpha) {
        for (int beta = 0; beta < dim; ++beta) {
            MatrixXcd eps = table.slice(alpha, beta);
            if (alpha == beta) {
                eps -= report.G;
                report.eps_diagonal_max = std::max(report.eps_diagonal_max, eps.cwiseAbs().maxCoeff());
            } else {
                report.eps_off_diagonal_max = std::max(report.eps_off_diagonal_max, eps.cwiseAbs().maxCoeff());
            }
            report.eps_slices.push_back(std::move(eps));
        }
    }
    report.eps_max = std::max(report.eps_diagonal_max, report.eps_off_diagonal_max);
    report.spectrum = hermitian_eigen(report.G, false).eigenvalues();
    report.lambda_min_G = report.spectrum.minCoeff();
    report.trace_G = report.G.trace().real();
    return report;
}

/// G diagonalized as D = V G V^dag, with the transformed effects A~ = sum_F conj(v(A, F)) F.
///
/// With this coefficient choice (1/M) sum_alpha <alpha|A~^dag B~|alpha> = D(A, B) for complex V;
/// for real G it coincides with using v(A, F) directly.
struct DiagonalizedKL {
    static constexpr double kResidualTolerance = 1e-10;

    MatrixXcd V;
    VectorXd d;
    GramBlockTable transformed;
    /// max |eps~(A, B, alpha, beta)| with eps~ = <alpha|A~^dag B~|beta> - d_A delta delta.
    double eps_tilde_max = 0.0;
    /// |Omega| eps_max.
    double eps_tilde_bound = 0.0;
    double unitarity_residual = 0.0;
    double diagonality_residual = 0.0;
    /// max |(1/M) sum_alpha <alpha|A~^dag B~|alpha> - d_A delta_AB|.
    double transformed_average_residual = 0.0;

    /// Coefficients C with A~ = sum_F C(A, F) F.
    MatrixXcd mixing() const { return V.conjugate(); }

    /// eps~ slice for (alpha, beta).
    MatrixXcd eps_tilde_slice(int alpha, int beta) const {
        MatrixXcd out = transformed.slice(alpha, beta);
        if (alpha == beta) {
            out -= d.cast<Complex>().asDiagonal();
        }
        return out;
    }
};

/// Rows of V are eigenvectors of G, ascending in eigenvalue. Within a cluster of
/// eigenvalues equal to 1e-12 relative, rows are ordered by their leading label.
inline DiagonalizedKL diagonalize_gram(const KLReport &report, const GramBlockTable &table) {
    const double scale = std::max(1.0, report.G.size() ? report.G.cwiseAbs().maxCoeff() : 0.0);
    if (hermiticity_defect(report.G) > 1e-12 * scale) {
        throw invalid_input("G is not Hermitian");
    }
    const auto solver = hermitian_eigen(report.G);
    const VectorXd &values = solver.eigenvalues();
    const MatrixXcd &vectors = solver.eigenvectors();
    const auto n = values.size();

    auto leading_label = [&](Eigen::Index col) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (std::abs(vectors(r, col)) > best_abs + 1e-12) {
                best_abs = std::abs(vectors(r, col));
                best = r;
            }
        }
        return best;
    };
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index stop = start + 1;
        while (stop < n && values(stop) - values(stop - 1) <= 1e-12 * scale) {
            ++stop;
        }
        std::stable_sort(order.begin() + start, order.begin() + stop,
                         [&](Eigen::Index a, Eigen::Index b) { return leading_label(a) < leading_label(b); });
        start = stop;
    }

    DiagonalizedKL out{MatrixXcd(n, n), VectorXd(n), table};
    for (Eigen::Index row = 0; row < n; ++row) {
        const Eigen::Index col = order[static_cast<std::size_t>(row)];
        out.V.row(row) = vectors.col(col).adjoint();
        out.d(row) = values(col);
    }
    const MatrixXcd identity = MatrixXcd::Identity(n, n);
    out.unitarity_residual = (out.V * out.V.adjoint() - identity).cwiseAbs().maxCoeff();
    const MatrixXcd rotated = out.V * report.G * out.V.adjoint();
    out.diagonality_residual = (rotated - MatrixXcd(out.d.cast<Complex>().asDiagonal())).cwiseAbs().maxCoeff();
    if (out.unitarity_residual > DiagonalizedKL::kResidualTolerance ||
        out.diagonality_residual > DiagonalizedKL::kResidualTolerance * scale) {
        throw convergence_failure("eigendecomposition of G is inaccurate (unitarity " +
                                  std::to_string(out.unitarity_residual) + ", diagonality " +
                                  std::to_string(out.diagonality_residual) + ")");
    }
    out.transformed = table.transformed(out.mixing());
    const int dim = table.code_dimension();
    MatrixXcd average = MatrixXcd::Zero(n, n);
    for (int alpha = 0; alpha < dim; ++alpha) {
        average += out.transformed.slice(alpha, alpha);
        for (int beta = 0; beta < dim; ++beta) {
            out.eps_tilde_max = std::max(out.eps_tilde_max, out.eps_tilde_slice(alpha, beta).cwiseAbs().maxCoeff());
        }
    }
    average /= static_cast<double>(dim);
    out.transformed_average_residual =
        (average - MatrixXcd(out.d.cast<Complex>().asDiagonal())).cwiseAbs().maxCoeff();
    if (out.transformed_average_residual > DiagonalizedKL::kResidualTolerance * scale) {
        throw convergence_failure("transformed effects do not diagonalize the averaged Gram matrix");
    }
    out.eps_tilde_bound = static_cast<double>(n) * report.eps_max;
    return out;
}

/// (tr G - M n^2 eps) / (1 + M n^3 eps / lambda_min(G)) for n effects.
inline double theorem1_bound_value(double trace_G, double lambda_min_G, double eps, int code_dimension,
                                   std::size_t num_effects) {
    if (!(lambda_min_G > 0.0)) {
        throw non_positive_lambda_min("lambda_min(G) = " + std::to_string(lambda_min_G) + " is not positive");
    }
    const double n = static_cast<double>(num_effects);
    const double dim = static_cast<double>(code_dimension);
    return (trace_G - dim * n * n * eps) / (1.0 + dim * n * n * n * eps / lambda_min_G);
}

struct Theorem1Result {
    double bound = 0.0;
    /// d_A - M |Omega| eps, ascending with d.
    VectorXd per_effect_floor;
    /// Sufficient rescaling M |Omega|^3 eps / lambda_min(G).
    double eta_sufficient = 0.0;
};

inline Theorem1Result theorem1_bound(const KLReport &report) {
    Theorem1Result out;
    out.bound = theorem1_bound_value(report.trace_G, report.lambda_min_G, report.eps_max, report.code_dimension,
                                     report.num_effects);
    const double n = static_cast<double>(report.num_effects);
    const double shift = report.code_dimension * n * report.eps_max;
    out.per_effect_floor = report.spectrum.array() - shift;
    out.eta_sufficient = report.code_dimension * n * n * n * report.eps_max / report.lambda_min_G;
    return out;
}

struct Corollary2Point {
    double gamma = 0.0;
    double trace_G = 0.0;
    double lambda_min_G = 0.0;
    double eps_max = 0.0;
    double bound = 0.0;
};

struct Corollary2Report {
    std::vector<Corollary2Point> points;
    /// Fit of 1 - bound against gamma.
    LogLogFit fit;
};

inline void check_scaling_grid(std::span<const double> grid, double max_gamma, double min_decades, std::size_t min_points) {
    if (grid.size() < min_points) {
        throw invalid_input("scaling grid needs at least " + std::to_string(min_points) + " points, got " +
                            std::to_string(grid.size()));
    }
    for (double g : grid) {
        if (!(g > 0.0 && g <= max_gamma && g < 1.0)) {
            throw invalid_input("scaling grid point " + std::to_string(g) + " outside (0, " +
                                std::to_string(max_gamma) + "]");
        }
    }
    if (decades_spanned(grid) < min_decades - 1e-9) {
        throw invalid_input("scaling grid must span at least " + std::to_string(min_decades) + " decades");
    }
}

/// KL fidelity bound across a gamma grid for the weight <= t effects, with the order of 1 - bound.
inline Corollary2Report corollary2_check(const PICode &code, int t, std::span<const double> gamma_grid) {
    check_scaling_grid(gamma_grid, 1.0, 1.5, 5);
    Corollary2Report out;
    std::vector<double> gammas;
    std::vector<double> deficits;
    for (double gamma : gamma_grid) {
        const TruncatedKrausSet omega(code.num_qubits(), t, gamma);
        const KLReport report = kl_perturbation(gram_blocks(code, omega, GramPath::closed_form));
        const double bound = theorem1_bound(report).bound;
        out.points.push_back({gamma, report.trace_G, report.lambda_min_G, report.eps_max, bound});
        gammas.push_back(gamma);
        deficits.push_back(1.0 - bound);
    }
    out.fit = fit_log_log(gammas, deficits);
    return out;
}

}  // namespace aqec

#endif
