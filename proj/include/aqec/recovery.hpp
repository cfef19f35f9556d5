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

#ifndef AQEC_RECOVERY_HPP
#define AQEC_RECOVERY_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "aqec/channels.hpp"
#include "aqec/code_space.hpp"
#include "aqec/errors.hpp"
#include "aqec/linalg.hpp"
#include "aqec/perturbed_kl.hpp"
#include "aqec/pi_ad_codes.hpp"

namespace aqec {

/// Density operator supported on the code, in the codeword basis.
class DensityOnCode {
  public:
    static constexpr double kTolerance = 1e-12;

    explicit DensityOnCode(MatrixXcd rho) : rho_(std::move(rho)) {
        if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
            throw invalid_input("density matrix must be square and non-empty");
        }
        if (hermiticity_defect(rho_) > kTolerance) {
            throw invalid_input("density matrix is not Hermitian");
        }
        if (std::abs(rho_.trace() - Complex(1.0)) > kTolerance) {
            throw invalid_input("density matrix trace is not 1");
        }
        if (min_eigenvalue(rho_) < -kTolerance) {
            throw invalid_input("density matrix is not positive semidefinite");
        }
    }

    static DensityOnCode maximally_mixed(int dimension) {
        return DensityOnCode(MatrixXcd::Identity(dimension, dimension) / static_cast<double>(dimension));
    }

    static DensityOnCode pure(int dimension, int index) {
        MatrixXcd rho = MatrixXcd::Zero(dimension, dimension);
        rho(index, index) = 1.0;
        return DensityOnCode(std::move(rho));
    }

    /// Projects onto the density set first; for optimizer output.
    static DensityOnCode nearest(const MatrixXcd &h) { return DensityOnCode(project_onto_density_matrices(h)); }

    const MatrixXcd &matrix() const { return rho_; }
    int dimension() const { return static_cast<int>(rho_.rows()); }
    /// Eigenvalues p_beta, ascending.
    VectorXd eigen_weights() const { return hermitian_eigen(rho_, false).eigenvalues(); }

  private:
    MatrixXcd rho_;
};

/// Ginibre draw: rho = X X^dag / tr(X X^dag) with standard complex normal X.
template <typename Rng>
DensityOnCode random_density(int dimension, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    MatrixXcd x(dimension, dimension);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            x(i, j) = {re, im};
        }
    }
    MatrixXcd rho = x * x.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityOnCode(std::move(rho));
}

enum class EffectBasis {
    /// The damping effects A_k themselves.
    original,
    /// The effects A~ that diagonalize G.
    diagonalized,
};

/// Truncated recovery R_A = S_A Pi A^dag with S_A = (Pi A^dag A Pi)^{-1/2}, one per effect.
///
/// On the polar support this equals Pi U_A^dag, where A Pi = U_A |A Pi|. The unitary
/// extension of U_A off that support never enters, since R_A is only applied to states of
/// the form B|code>. Effects may be linear combinations of the damping effects:
/// effect a is sum_F mixing(a, F) A_F.
class RecoveryMap {
  public:
    static constexpr double kDefaultRankTolerance = 1e-12;

    RecoveryMap(GramBlockTable effect_table, MatrixXcd mixing, double rank_tol)
        : table_(std::move(effect_table)), mixing_(std::move(mixing)), rank_tol_(rank_tol) {
        if (mixing_.rows() != static_cast<Eigen::Index>(table_.num_effects())) {
            throw invalid_input("mixing matrix rows must match the number of recovery effects");
        }
        for (std::size_t a = 0; a < table_.num_effects(); ++a) {
            MatrixXcd block = table_.code_block(a, a);
            block = 0.5 * (block + block.adjoint());
            auto pinv = pseudo_inverse_sqrt(block, rank_tol_);
            if (pinv.rank == 0) {
                throw effect_singular("effect " + std::to_string(a) + " annihilates the code");
            }
            blocks_.push_back(std::move(block));
            inverse_sqrt_.push_back(std::move(pinv.inverse_sqrt));
            ranks_.push_back(pinv.rank);
        }
    }

    std::size_t num_effects() const { return table_.num_effects(); }
    int code_dimension() const { return table_.code_dimension(); }
    double gamma() const { return table_.gamma(); }
    double rank_tolerance() const { return rank_tol_; }

    /// <alpha| A~^dag B~ |beta> for the recovery effects.
    const GramBlockTable &effect_table() const { return table_; }
    const MatrixXcd &mixing() const { return mixing_; }

    const MatrixXcd &gram_block(std::size_t a) const { return blocks_.at(a); }
    const MatrixXcd &inverse_sqrt(std::size_t a) const { return inverse_sqrt_.at(a); }
    int rank(std::size_t a) const { return ranks_.at(a); }

    /// Pi U_A^dag U_B Pi = S_A (Pi A^dag B Pi) S_B.
    MatrixXcd polar_overlap(std::size_t a, std::size_t b) const {
        return inverse_sqrt_.at(a) * table_.code_block(a, b) * inverse_sqrt_.at(b);
    }

    /// max_A |S_A P_A S_A - (rank-r_A projector)|, measured against its own eigenvalues.
    double inverse_sqrt_residual() const {
        double worst = 0.0;
        for (std::size_t a = 0; a < num_effects(); ++a) {
            const MatrixXcd product = polar_overlap(a, a);
            const VectorXd values = hermitian_eigen(0.5 * (product + product.adjoint()), false).eigenvalues();
            const auto dim = values.size();
            for (Eigen::Index i = 0; i < dim; ++i) {
                const double target = i >= dim - ranks_[a] ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(values(i) - target));
            }
        }
        return worst;
    }

    std::optional<double> eta() const { return eta_; }
    void set_eta(double eta) {
        if (!(eta >= 0.0)) {
            throw invalid_input("rescaling parameter must be non-negative");
        }
        eta_ = eta;
    }
    double required_eta() const {
        if (!eta_) {
            throw invalid_input("rescaling parameter has not been set; call eta_bound first");
        }
        return *eta_;
    }

  private:
    GramBlockTable table_;
    MatrixXcd mixing_;
    double rank_tol_;
    std::vector<MatrixXcd> blocks_;
    std::vector<MatrixXcd> inverse_sqrt_;
    std::vector<int> ranks_;
    std::optional<double> eta_;
};

inline RecoveryMap build_truncated_recovery(const GramBlockTable &table, EffectBasis basis = EffectBasis::original,
                                            double rank_tol = RecoveryMap::kDefaultRankTolerance) {
    if (basis == EffectBasis::original) {
        const auto n = static_cast<Eigen::Index>(table.num_effects());
        return RecoveryMap(table, MatrixXcd::Identity(n, n), rank_tol);
    }
    const KLReport report = kl_perturbation(table);
    const DiagonalizedKL diag = diagonalize_gram(report, table);
    return RecoveryMap(diag.transformed, diag.mixing(), rank_tol);
}

inline RecoveryMap build_truncated_recovery(const CodeSpace &code, const TruncatedKrausSet &omega,
                                            EffectBasis basis = EffectBasis::original,
                                            double rank_tol = RecoveryMap::kDefaultRankTolerance) {
    return build_truncated_recovery(gram_blocks(code, omega), basis, rank_tol);
}

inline RecoveryMap build_truncated_recovery(const PICode &code, const TruncatedKrausSet &omega,
                                            EffectBasis basis = EffectBasis::original,
                                            double rank_tol = RecoveryMap::kDefaultRankTolerance) {
    return build_truncated_recovery(gram_blocks(code, omega), basis, rank_tol);
}

/// max over A != B of ||Pi U_A^dag U_B Pi||_2; zero iff the polar supports are orthogonal.
inline double projector_orthogonality_defect(const RecoveryMap &rm) {
    double worst = 0.0;
    for (std::size_t a = 0; a < rm.num_effects(); ++a) {
        for (std::size_t b = 0; b < rm.num_effects(); ++b) {
            if (a != b) {
                worst = std::max(worst, spectral_norm(rm.polar_overlap(a, b)));
            }
        }
    }
    return worst;
}

/// Sets eta = |Omega|^2 * projector_orthogonality_defect and returns it.
inline double eta_bound(RecoveryMap &rm) {
    const double n = static_cast<double>(rm.num_effects());
    const double eta = n * n * projector_orthogonality_defect(rm);
    rm.set_eta(eta);
    return eta;
}

/// ||sum_A R_A^dag R_A||_2 via the Gram matrix of the vectors A Pi S_A |beta>, whose
/// blocks are S_A (Pi A^dag B Pi) S_B. Throws bound_violated above 1 + eta + 1e-10.
inline double trace_bound_check(const RecoveryMap &rm) {
    const double eta = rm.required_eta();
    const auto n = static_cast<Eigen::Index>(rm.num_effects());
    const Eigen::Index dim = rm.code_dimension();
    MatrixXcd gram(n * dim, n * dim);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            gram.block(a * dim, b * dim, dim, dim) =
                rm.polar_overlap(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        }
    }
    gram = 0.5 * (gram + gram.adjoint());
    const double norm = max_eigenvalue(gram);
    if (norm > 1.0 + eta + 1e-10) {
        throw bound_violated("||sum R_A^dag R_A|| = " + std::to_string(norm) + " exceeds 1 + eta = " +
                             std::to_string(1.0 + eta));
    }
    return norm;
}

/// sum_A lambda_min(Pi A^dag A Pi) over the damping effects of a table.
inline double leung_lower_bound(const GramBlockTable &table) {
    double total = 0.0;
    for (std::size_t a = 0; a < table.num_effects(); ++a) {
        const MatrixXcd block = table.code_block(a, a);
        total += min_eigenvalue(0.5 * (block + block.adjoint()));
    }
    return total;
}

/// The same sum over the effects the recovery was built from.
inline double leung_lower_bound(const RecoveryMap &rm) { return leung_lower_bound(rm.effect_table()); }

inline double leung_lower_bound(const CodeSpace &code, const TruncatedKrausSet &omega) {
    return leung_lower_bound(gram_blocks(code, omega));
}

/// sum_A |tr(R_A A rho)|^2 = sum_A |tr(S_A P_A rho)|^2, unscaled.
inline double overlap_sum(const RecoveryMap &rm, const DensityOnCode &rho) {
    double total = 0.0;
    for (std::size_t a = 0; a < rm.num_effects(); ++a) {
        total += std::norm((rm.inverse_sqrt(a) * rm.gram_block(a) * rho.matrix()).trace());
    }
    return total;
}

/// Correlations of the full channel against the truncated effects:
/// C[(F,l,i), (F',l',i')] = sum over all 2^m patterns B of conj(K_FB[l,i]) K_F'B[l',i'],
/// with K_FB[l,i] = <l_L| A_F^dag A_B |i_L>. Index (F,l,i) -> F M^2 + l M + i.
class ChannelResponse {
  public:
    ChannelResponse(std::size_t num_effects, int code_dimension, MatrixXcd correlation)
        : n_(num_effects), dim_(code_dimension), correlation_(std::move(correlation)) {
        const auto size = static_cast<Eigen::Index>(n_ * static_cast<std::size_t>(dim_ * dim_));
        if (correlation_.rows() != size || correlation_.cols() != size) {
            throw invalid_input("channel response matrix has the wrong size");
        }
    }

    std::size_t num_effects() const { return n_; }
    int code_dimension() const { return dim_; }
    const MatrixXcd &correlation() const { return correlation_; }

    static Eigen::Index index(std::size_t effect, int l, int i, int dim) {
        return static_cast<Eigen::Index>(effect * static_cast<std::size_t>(dim * dim) + static_cast<std::size_t>(l * dim + i));
    }

  private:
    std::size_t n_;
    int dim_;
    MatrixXcd correlation_;
};

/// Orbit-grouped response for a PI code. For effects F, F' overlapping on o qubits, the
/// patterns B are counted by how many qubits they take from F&F', F\F', F'\F and the rest;
/// each matrix element depends only on (|F|, |B|, |F u B|).
inline ChannelResponse channel_response_orbits(const PICode &code, const TruncatedKrausSet &omega) {
    if (code.num_qubits() != omega.num_qubits()) {
        throw invalid_input("code and Kraus set act on different qubit counts");
    }
    const int m = code.num_qubits();
    const int dim = 2;
    const PIElementEvaluator evaluator(code, omega.gamma());
    const BinomialTable binomials(m);
    const std::size_t n = omega.size();

    std::map<std::tuple<int, int, int>, std::array<double, 4>> element_cache;
    auto elements = [&](int weight_f, int weight_b, int tau) -> const std::array<double, 4> & {
        const auto key = std::make_tuple(weight_f, weight_b, tau);
        auto it = element_cache.find(key);
        if (it == element_cache.end()) {
            std::array<double, 4> values{};
            for (int l = 0; l < dim; ++l) {
                for (int i = 0; i < dim; ++i) {
                    values[static_cast<std::size_t>(l * dim + i)] = evaluator.element(weight_f, weight_b, tau, l, i);
                }
            }
            it = element_cache.emplace(key, values).first;
        }
        return it->second;
    };

    // 4x4 block per orbit class (|F|, |F'|, |F & F'|).
    std::map<std::tuple<int, int, int>, Eigen::Matrix4d> class_cache;
    auto class_block = [&](int wf, int wg, int overlap) -> const Eigen::Matrix4d & {
        const auto key = std::make_tuple(wf, wg, overlap);
        auto it = class_cache.find(key);
        if (it != class_cache.end()) {
            return it->second;
        }
        const int s1 = overlap;
        const int s2 = wf - overlap;
        const int s3 = wg - overlap;
        const int s4 = m - wf - wg + overlap;
        Eigen::Matrix4d block = Eigen::Matrix4d::Zero();
        for (int x1 = 0; x1 <= s1; ++x1) {
            for (int x2 = 0; x2 <= s2; ++x2) {
                for (int x3 = 0; x3 <= s3; ++x3) {
                    for (int x4 = 0; x4 <= s4; ++x4) {
                        const double count = binomials(s1, x1) * binomials(s2, x2) * binomials(s3, x3) * binomials(s4, x4);
                        const int wb = x1 + x2 + x3 + x4;
                        const auto &kf = elements(wf, wb, wf + wb - (x1 + x2));
                        const auto &kg = elements(wg, wb, wg + wb - (x1 + x3));
                        for (int p = 0; p < 4; ++p) {
                            if (kf[static_cast<std::size_t>(p)] == 0.0) {
                                continue;
                            }
                            for (int q = 0; q < 4; ++q) {
                                block(p, q) += count * kf[static_cast<std::size_t>(p)] * kg[static_cast<std::size_t>(q)];
                            }
                        }
                    }
                }
            }
        }
        return class_cache.emplace(key, block).first->second;
    };

    const auto size = static_cast<Eigen::Index>(n * 4);
    MatrixXcd correlation = MatrixXcd::Zero(size, size);
    for (std::size_t f = 0; f < n; ++f) {
        for (std::size_t g = 0; g < n; ++g) {
            const auto &block = class_block(omega[f].weight(), omega[g].weight(), weight_of(omega[f].k & omega[g].k));
            correlation.block(static_cast<Eigen::Index>(f * 4), static_cast<Eigen::Index>(g * 4), 4, 4) =
                block.cast<Complex>();
        }
    }
    return ChannelResponse(n, dim, std::move(correlation));
}

inline constexpr int kMaxEnumeratedQubits = 20;

namespace detail {

/// Dense images A_F |l_L> for every truncated effect and codeword.
inline std::vector<std::vector<Eigen::VectorXcd>> dense_effect_images(const CodeSpace &code,
                                                                      const TruncatedKrausSet &omega) {
    const auto full = static_cast<Eigen::Index>(BasisLabel{1} << code.num_qubits());
    std::vector<std::vector<Eigen::VectorXcd>> images(omega.size());
    for (std::size_t f = 0; f < omega.size(); ++f) {
        for (const auto &cw : code.codewords()) {
            Eigen::VectorXcd dense = Eigen::VectorXcd::Zero(full);
            const SparseStateVector image = apply_damping(omega[f], omega.gamma(), cw);
            for (const auto &[x, amp] : image.entries()) {
                dense(static_cast<Eigen::Index>(x)) = amp;
            }
            images[f].push_back(std::move(dense));
        }
    }
    return images;
}

/// K_FB for one pattern B, as an n x (M*M) matrix with columns l*M + i.
inline MatrixXcd response_rows(const CodeSpace &code, const TruncatedKrausSet &omega,
                               const std::vector<std::vector<Eigen::VectorXcd>> &images, BasisLabel pattern,
                               bool &nonzero) {
    const int dim = code.dimension();
    const DampingLabel label{code.num_qubits(), pattern};
    std::vector<SparseStateVector> damaged;
    nonzero = false;
    for (const auto &cw : code.codewords()) {
        damaged.push_back(apply_damping(label, omega.gamma(), cw));
        nonzero = nonzero || !damaged.back().empty();
    }
    MatrixXcd rows = MatrixXcd::Zero(static_cast<Eigen::Index>(omega.size()), dim * dim);
    if (!nonzero) {
        return rows;
    }
    for (std::size_t f = 0; f < omega.size(); ++f) {
        for (int l = 0; l < dim; ++l) {
            const auto &bra = images[f][static_cast<std::size_t>(l)];
            for (int i = 0; i < dim; ++i) {
                Complex total{};
                for (const auto &[x, amp] : damaged[static_cast<std::size_t>(i)].entries()) {
                    total += std::conj(bra(static_cast<Eigen::Index>(x))) * amp;
                }
                rows(static_cast<Eigen::Index>(f), l * dim + i) = total;
            }
        }
    }
    return rows;
}

inline void check_enumerable(const CodeSpace &code, const TruncatedKrausSet &omega) {
    if (code.num_qubits() != omega.num_qubits()) {
        throw invalid_input("code and Kraus set act on different qubit counts");
    }
    if (code.num_qubits() > kMaxEnumeratedQubits) {
        throw invalid_input("literal enumeration over 2^m damping patterns is limited to m <= 20");
    }
}

}  // namespace detail

/// Response by literal enumeration of all 2^m damping patterns.
inline ChannelResponse channel_response_enumerated(const CodeSpace &code, const TruncatedKrausSet &omega) {
    detail::check_enumerable(code, omega);
    const int dim = code.dimension();
    const auto images = detail::dense_effect_images(code, omega);
    const auto size = static_cast<Eigen::Index>(omega.size() * static_cast<std::size_t>(dim * dim));
    MatrixXcd correlation = MatrixXcd::Zero(size, size);
    const BasisLabel patterns = BasisLabel{1} << code.num_qubits();
    for (BasisLabel pattern = 0; pattern < patterns; ++pattern) {
        bool nonzero = false;
        const MatrixXcd rows = detail::response_rows(code, omega, images, pattern, nonzero);
        if (!nonzero) {
            continue;
        }
        // Row-major flatten: index f*M^2 + l*M + i.
        Eigen::VectorXcd k(size);
        for (Eigen::Index f = 0; f < rows.rows(); ++f) {
            for (Eigen::Index c = 0; c < rows.cols(); ++c) {
                k(f * rows.cols() + c) = rows(f, c);
            }
        }
        correlation.noalias() += k.conjugate() * k.transpose();
    }
    return ChannelResponse(omega.size(), dim, std::move(correlation));
}

/// Unscaled sum_A sum_B |tr(R_A B rho)|^2 from a response matrix.
inline double composed_fidelity_unscaled(const ChannelResponse &response, const RecoveryMap &rm,
                                         const DensityOnCode &rho) {
    const int dim = rm.code_dimension();
    if (response.num_effects() != static_cast<std::size_t>(rm.mixing().cols()) || response.code_dimension() != dim ||
        rho.dimension() != dim) {
        throw invalid_input("response, recovery map and density matrix dimensions disagree");
    }
    const auto size = response.correlation().rows();
    double total = 0.0;
    Eigen::VectorXcd y(size);
    for (std::size_t a = 0; a < rm.num_effects(); ++a) {
        const MatrixXcd x = rho.matrix() * rm.inverse_sqrt(a);
        for (std::size_t f = 0; f < response.num_effects(); ++f) {
            const Complex coeff = std::conj(rm.mixing()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(f)));
            for (int l = 0; l < dim; ++l) {
                for (int i = 0; i < dim; ++i) {
                    y(ChannelResponse::index(f, l, i, dim)) = coeff * x(i, l);
                }
            }
        }
        total += (y.adjoint() * response.correlation() * y)(0, 0).real();
    }
    return total;
}

/// F_e(rho) of the rescaled recovery composed with the full channel, divided by 1 + eta.
inline double entanglement_fidelity(const ChannelResponse &response, const RecoveryMap &rm, const DensityOnCode &rho) {
    return composed_fidelity_unscaled(response, rm, rho) / (1.0 + rm.required_eta());
}

/// Same value by direct summation of |tr(R_A B rho)|^2 over all 2^m patterns B.
inline double entanglement_fidelity_enumerated(const CodeSpace &code, const TruncatedKrausSet &omega,
                                               const RecoveryMap &rm, const DensityOnCode &rho) {
    detail::check_enumerable(code, omega);
    const double eta = rm.required_eta();
    const int dim = code.dimension();
    const auto images = detail::dense_effect_images(code, omega);
    const BasisLabel patterns = BasisLabel{1} << code.num_qubits();
    double total = 0.0;
    for (BasisLabel pattern = 0; pattern < patterns; ++pattern) {
        bool nonzero = false;
        const MatrixXcd rows = detail::response_rows(code, omega, images, pattern, nonzero);
        if (!nonzero) {
            continue;
        }
        // Row a: <l| A~_a^dag B |i> = sum_F conj(C(a, F)) K_FB[l, i].
        const MatrixXcd mixed = rm.mixing().conjugate() * rows;
        for (std::size_t a = 0; a < rm.num_effects(); ++a) {
            MatrixXcd k(dim, dim);
            for (int l = 0; l < dim; ++l) {
                for (int i = 0; i < dim; ++i) {
                    k(l, i) = mixed(static_cast<Eigen::Index>(a), l * dim + i);
                }
            }
            total += std::norm((rm.inverse_sqrt(a) * k * rho.matrix()).trace());
        }
    }
    return total / (1.0 + eta);
}

/// F_e as a quadratic form x^T Q x over real coordinates of Hermitian matrices.
struct FidelityForm {
    MatrixXd Q;
    int code_dimension = 0;

    double operator()(const MatrixXcd &rho) const {
        const VectorXd x = to_real_coordinates(rho);
        return x.dot(Q * x);
    }
    double operator()(const DensityOnCode &rho) const { return (*this)(rho.matrix()); }
};

/// Builds Q (rescaled by 1/(1+eta)) by polarization over the coordinate basis.
inline FidelityForm fidelity_form(const ChannelResponse &response, const RecoveryMap &rm) {
    const double scale = 1.0 / (1.0 + rm.required_eta());
    const int dim = rm.code_dimension();
    const Eigen::Index size = static_cast<Eigen::Index>(dim) * dim;
    // The quadratic form extends to Hermitian, not necessarily positive, arguments; evaluate
    // composed_fidelity_unscaled's body directly on them.
    auto quadratic = [&](const VectorXd &x) {
        const MatrixXcd h = from_real_coordinates(x, dim);
        const auto n = response.correlation().rows();
        double total = 0.0;
        Eigen::VectorXcd y(n);
        for (std::size_t a = 0; a < rm.num_effects(); ++a) {
            const MatrixXcd prod = h * rm.inverse_sqrt(a);
            for (std::size_t f = 0; f < response.num_effects(); ++f) {
                const Complex coeff = std::conj(rm.mixing()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(f)));
                for (int l = 0; l < dim; ++l) {
                    for (int i = 0; i < dim; ++i) {
                        y(ChannelResponse::index(f, l, i, dim)) = coeff * prod(i, l);
                    }
                }
            }
            total += (y.adjoint() * response.correlation() * y)(0, 0).real();
        }
        return total;
    };
    FidelityForm form{MatrixXd::Zero(size, size), dim};
    std::vector<double> diag(static_cast<std::size_t>(size));
    for (Eigen::Index p = 0; p < size; ++p) {
        diag[static_cast<std::size_t>(p)] = quadratic(VectorXd::Unit(size, p));
        form.Q(p, p) = diag[static_cast<std::size_t>(p)];
    }
    for (Eigen::Index p = 0; p < size; ++p) {
        for (Eigen::Index q = p + 1; q < size; ++q) {
            const double both = quadratic(VectorXd::Unit(size, p) + VectorXd::Unit(size, q));
            const double value = 0.5 * (both - diag[static_cast<std::size_t>(p)] - diag[static_cast<std::size_t>(q)]);
            form.Q(p, q) = value;
            form.Q(q, p) = value;
        }
    }
    form.Q *= scale;
    return form;
}

struct WorstCaseResult {
    double value = 0.0;
    MatrixXcd rho;
    /// Frank-Wolfe gap tr(grad rho) - lambda_min(grad); upper-bounds value - global minimum.
    double stationarity = 0.0;
    int iterations = 0;
};

inline constexpr int kWorstCaseIterationCap = 100000;
inline constexpr double kMaxStepScale = 1e6;

/// Minimizes the convex form over density matrices by projected gradient with Armijo
/// backtracking, stopping when the Frank-Wolfe gap drops to tol.
inline WorstCaseResult worst_case_fidelity(const FidelityForm &form, double tol = 1e-10) {
    const int dim = form.code_dimension;
    const MatrixXd &Q = form.Q;
    auto value = [&](const VectorXd &x) { return x.dot(Q * x); };
    auto gap_of = [&](const VectorXd &x, const VectorXd &grad) {
        // grad is a coordinate vector; as a Hermitian matrix its inner product with rho is grad . x.
        return grad.dot(x) - min_eigenvalue(from_real_coordinates(grad, dim));
    };
    const double lipschitz = std::max(2.0 * hermitian_eigen(Q.cast<Complex>(), false).eigenvalues().maxCoeff(), 1e-300);

    VectorXd x = to_real_coordinates(MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
    double fx = value(x);
    double step = 1.0 / lipschitz;
    WorstCaseResult out;
    for (int iter = 0; iter < kWorstCaseIterationCap; ++iter) {
        const VectorXd grad = 2.0 * Q * x;
        const double gap = gap_of(x, grad);
        out.iterations = iter;
        if (gap <= tol) {
            out.value = fx;
            out.rho = from_real_coordinates(x, dim);
            out.stationarity = std::max(gap, 0.0);
            return out;
        }
        // Projection onto the trace-1 set ignores shifts along the identity; dropping that
        // component keeps x - step * grad from cancelling catastrophically at long steps.
        MatrixXcd direction = from_real_coordinates(grad, dim);
        direction -= (direction.trace().real() / dim) * MatrixXcd::Identity(dim, dim);
        const VectorXd traceless = to_real_coordinates(direction);
        step = std::min(2.0 * step, kMaxStepScale / lipschitz);
        while (true) {
            const VectorXd candidate =
                to_real_coordinates(project_onto_density_matrices(from_real_coordinates(x - step * traceless, dim)));
            const VectorXd delta = candidate - x;
            // For a quadratic, f(x + d) - f(x) - grad . d = d^T Q d exactly; testing that
            // term directly avoids comparing two nearly equal objective values.
            if (delta.dot(Q * delta) <= delta.squaredNorm() / (2.0 * step) || step < 1e-3 / lipschitz) {
                x = candidate;
                fx = value(candidate);
                break;
            }
            step *= 0.5;
        }
    }
    throw convergence_failure("worst-case fidelity did not reach stationarity " + std::to_string(tol) + " in " +
                              std::to_string(kWorstCaseIterationCap) + " iterations");
}

/// Minimum of the form over a Bloch-ball grid (M = 2 only): `shells` radii in (0, 1] times
/// `directions` Fibonacci-sphere directions, plus the centre.
inline double bloch_grid_minimum(const FidelityForm &form, int shells = 25, int directions = 500) {
    if (form.code_dimension != 2) {
        throw invalid_input("Bloch-ball grid needs a two-dimensional code");
    }
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    double best = form(MatrixXcd::Identity(2, 2) / 2.0);
    for (int d = 0; d < directions; ++d) {
        const double z = 1.0 - 2.0 * (d + 0.5) / directions;
        const double r_xy = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * d;
        const double x = r_xy * std::cos(phi);
        const double y = r_xy * std::sin(phi);
        for (int s = 1; s <= shells; ++s) {
            const double r = static_cast<double>(s) / shells;
            MatrixXcd rho(2, 2);
            rho(0, 0) = 0.5 * (1.0 + r * z);
            rho(1, 1) = 0.5 * (1.0 - r * z);
            rho(0, 1) = Complex(0.5 * r * x, -0.5 * r * y);
            rho(1, 0) = Complex(0.5 * r * x, 0.5 * r * y);
            best = std::min(best, form(rho));
        }
    }
    return best;
}

}  // namespace aqec

#endif
