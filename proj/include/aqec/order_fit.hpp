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

#ifndef AQEC_ORDER_FIT_HPP
#define AQEC_ORDER_FIT_HPP

#include <cmath>
#include <span>
#include <vector>

#include "aqec/perturbed_kl.hpp"
#include "aqec/pi_ad_codes.hpp"
#include "aqec/slope_fit.hpp"

namespace aqec {

struct OrderFit {
    std::vector<double> gammas;
    std::vector<double> values;
    LogLogFit fit;
};

/// eps_max over the grid from already computed reports.
inline OrderFit epsilon_order_from_reports(std::span<const KLReport> reports) {
    OrderFit out;
    for (const auto &r : reports) {
        out.gammas.push_back(r.gamma);
        out.values.push_back(r.eps_max);
    }
    out.fit = fit_log_log(out.gammas, out.values);
    return out;
}

/// Order of eps_max(gamma) for the weight <= t effects, from closed-form Gram blocks.
inline OrderFit epsilon_order_fit(const PICode &code, int t, std::span<const double> gamma_grid) {
    check_scaling_grid(gamma_grid, 0.1, 1.5, 3);
    std::vector<KLReport> reports;
    reports.reserve(gamma_grid.size());
    for (double gamma : gamma_grid) {
        reports.push_back(kl_perturbation(gram_blocks(code, TruncatedKrausSet(code.num_qubits(), t, gamma))));
    }
    return epsilon_order_from_reports(reports);
}

/// max |<0_L|A_k^dag A_k'|0_L> - <1_L|A_k^dag A_k'|1_L>| over equal weights |k| = |k'| <= t.
inline double diagonal_difference(const PICode &code, int t, double gamma) {
    const PIElementEvaluator evaluator(code, gamma);
    double worst = 0.0;
    for (int w = 0; w <= std::min(t, code.num_qubits()); ++w) {
        for (int tau = w; tau <= std::min(2 * w, code.num_qubits()); ++tau) {
            worst = std::max(worst, std::abs(evaluator.element(w, w, tau, 0, 0) - evaluator.element(w, w, tau, 1, 1)));
        }
    }
    return worst;
}

inline OrderFit diagonal_difference_order_fit(const PICode &code, int t, std::span<const double> gamma_grid) {
    check_scaling_grid(gamma_grid, 0.1, 1.5, 3);
    OrderFit out;
    for (double gamma : gamma_grid) {
        out.gammas.push_back(gamma);
        out.values.push_back(diagonal_difference(code, t, gamma));
    }
    out.fit = fit_log_log(out.gammas, out.values);
    return out;
}

/// Grid for the eps order of the weight <= t code: 10^-3..10^-1.5 for t = 1, else 1.5 decades
/// ending at 0.1, which keeps eps ~ gamma^(2t+1) above double roundoff for t = 2.
inline std::vector<double> default_epsilon_grid(int t) {
    if (t < 1) {
        throw invalid_input("order t must be >= 1");
    }
    return t == 1 ? log_spaced_grid(-3.0, -1.5, 8) : log_spaced_grid(-2.5, -1.0, 6);
}

/// Effect counts above this make the |Omega|^2 closed-form table impractical.
inline constexpr std::size_t kMaxOrderFitEffects = 4000;

inline std::size_t truncated_set_size(int m, int t) {
    std::size_t total = 0;
    for (int w = 0; w <= std::min(t, m); ++w) {
        total += static_cast<std::size_t>(binomial_double(m, w));
    }
    return total;
}

}  // namespace aqec

#endif
