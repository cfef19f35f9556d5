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

#ifndef AQEC_SLOPE_FIT_HPP
#define AQEC_SLOPE_FIT_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "aqec/errors.hpp"

namespace aqec {

/// Least-squares fit of log(y) = intercept + slope * log(x).
struct LogLogFit {
    enum class Status { fitted, exact_zero };

    Status status = Status::fitted;
    double slope = 0.0;
    /// log10 y at x = 1; residuals are in decades.
    double intercept = 0.0;
    double rms_residual = 0.0;
    std::size_t points = 0;

    bool exact() const { return status == Status::exact_zero; }
    std::string status_string() const { return exact() ? "exact" : "fitted"; }
};

/// Values at or below this are treated as exact zeros of the fitted quantity.
inline constexpr double kExactZeroThreshold = 1e-14;

/// Needs >= 2 points with distinct positive x. All-zero y gives Status::exact_zero.
inline LogLogFit fit_log_log(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw invalid_input("log-log fit needs matching x and y lengths");
    }
    if (xs.size() < 2) {
        throw invalid_input("log-log fit needs at least 2 points, got " + std::to_string(xs.size()));
    }
    LogLogFit fit;
    fit.points = xs.size();
    std::size_t zeros = 0;
    for (double y : ys) {
        if (std::abs(y) <= kExactZeroThreshold) {
            ++zeros;
        }
    }
    if (zeros == ys.size()) {
        fit.status = LogLogFit::Status::exact_zero;
        return fit;
    }
    if (zeros > 0) {
        throw invalid_input("log-log fit over a mix of zero and nonzero values");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
            throw invalid_input("log-log fit needs positive values");
        }
        sx += std::log10(xs[i]);
        sy += std::log10(ys[i]);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log10(xs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log10(ys[i]) - my);
    }
    if (!(sxx > 0.0)) {
        throw invalid_input("log-log fit needs at least two distinct x values");
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = std::log10(ys[i]) - (fit.intercept + fit.slope * std::log10(xs[i]));
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

/// Grid of `count` points evenly spaced in log10 between 10^lo and 10^hi.
inline std::vector<double> log_spaced_grid(double log10_lo, double log10_hi, int count) {
    if (count < 2) {
        throw invalid_input("log-spaced grid needs at least 2 points");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid.push_back(std::pow(10.0, log10_lo + (log10_hi - log10_lo) * i / (count - 1)));
    }
    return grid;
}

/// log10(max) - log10(min) of a positive grid.
inline double decades_spanned(std::span<const double> grid) {
    if (grid.empty()) {
        return 0.0;
    }
    double lo = grid[0];
    double hi = grid[0];
    for (double g : grid) {
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    return std::log10(hi / lo);
}

}  // namespace aqec

#endif
