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

#ifndef AQEC_LINALG_HPP
#define AQEC_LINALG_HPP

#include <algorithm>
#include <complex>
#include <functional>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aqec/errors.hpp"

namespace aqec {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double hermiticity_defect(const MatrixXcd &h) {
    if (h.rows() != h.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return h.size() == 0 ? 0.0 : (h - h.adjoint()).cwiseAbs().maxCoeff();
}

inline Eigen::SelfAdjointEigenSolver<MatrixXcd> hermitian_eigen(const MatrixXcd &h, bool vectors = true) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw convergence_failure("Hermitian eigensolver failed on a " + std::to_string(h.rows()) + "x" +
                                  std::to_string(h.cols()) + " matrix");
    }
    return solver;
}

inline double min_eigenvalue(const MatrixXcd &h) { return hermitian_eigen(h, false).eigenvalues().minCoeff(); }
inline double max_eigenvalue(const MatrixXcd &h) { return hermitian_eigen(h, false).eigenvalues().maxCoeff(); }

/// Largest singular value.
inline double spectral_norm(const MatrixXcd &a) {
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<MatrixXcd> svd(a);
    return svd.singularValues()(0);
}

/// H^{-1/2} on the retained spectrum of a PSD matrix.
struct PseudoInverseSqrt {
    MatrixXcd inverse_sqrt;
    VectorXd eigenvalues;
    int rank = 0;
};

/// Eigenvalues <= rank_tol * lambda_max are treated as zero.
inline PseudoInverseSqrt pseudo_inverse_sqrt(const MatrixXcd &h, double rank_tol) {
    const auto solver = hermitian_eigen(h);
    const VectorXd &values = solver.eigenvalues();
    const double top = values.size() ? values.maxCoeff() : 0.0;
    PseudoInverseSqrt out;
    out.eigenvalues = values;
    out.inverse_sqrt = MatrixXcd::Zero(h.rows(), h.cols());
    if (!(top > 0.0)) {
        return out;
    }
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) > rank_tol * top) {
            const auto v = solver.eigenvectors().col(i);
            out.inverse_sqrt += (1.0 / std::sqrt(values(i))) * v * v.adjoint();
            ++out.rank;
        }
    }
    return out;
}

struct GershgorinDiscs {
    VectorXd lower;
    VectorXd upper;
    double global_lower = 0.0;
    double global_upper = 0.0;
};

/// Row-disc enclosures [H_ii - R_i, H_ii + R_i], R_i = sum_{j != i} |H_ij|.
inline GershgorinDiscs gershgorin_interval(const MatrixXcd &h, double hermitian_tol = 1e-12) {
    const double scale = std::max(1.0, h.size() ? h.cwiseAbs().maxCoeff() : 0.0);
    if (h.rows() == 0 || hermiticity_defect(h) > hermitian_tol * scale) {
        throw invalid_input("Gershgorin enclosure needs a non-empty Hermitian matrix");
    }
    GershgorinDiscs out;
    out.lower.resize(h.rows());
    out.upper.resize(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        const double radius = h.row(i).cwiseAbs().sum() - std::abs(h(i, i));
        const double centre = h(i, i).real();
        out.lower(i) = centre - radius;
        out.upper(i) = centre + radius;
    }
    out.global_lower = out.lower.minCoeff();
    out.global_upper = out.upper.maxCoeff();
    return out;
}

// Hermitian M x M matrices as vectors in R^{M^2}, orthonormal for the Frobenius product:
// diagonal entries, then sqrt(2) Re and sqrt(2) Im of each upper entry (row-major).

inline VectorXd to_real_coordinates(const MatrixXcd &h) {
    const Eigen::Index n = h.rows();
    VectorXd x(n * n);
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        x(p++) = h(i, i).real();
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            x(p++) = std::sqrt(2.0) * h(i, j).real();
            x(p++) = std::sqrt(2.0) * h(i, j).imag();
        }
    }
    return x;
}

inline MatrixXcd from_real_coordinates(const VectorXd &x, Eigen::Index n) {
    MatrixXcd h = MatrixXcd::Zero(n, n);
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) = x(p++);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double re = x(p++) / std::sqrt(2.0);
            const double im = x(p++) / std::sqrt(2.0);
            h(i, j) = {re, im};
            h(j, i) = {re, -im};
        }
    }
    return h;
}

/// Euclidean projection onto {p >= 0, sum p = 1}.
inline VectorXd project_onto_simplex(const VectorXd &v) {
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double shift = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i];
        const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - candidate > 0.0) {
            shift = candidate;
        }
    }
    return (v.array() - shift).cwiseMax(0.0).matrix();
}

/// Frobenius-nearest density matrix.
inline MatrixXcd project_onto_density_matrices(const MatrixXcd &h) {
    const MatrixXcd symmetric = 0.5 * (h + h.adjoint());
    const auto solver = hermitian_eigen(symmetric);
    const VectorXd p = project_onto_simplex(solver.eigenvalues());
    return solver.eigenvectors() * p.cast<std::complex<double>>().asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace aqec

#endif
