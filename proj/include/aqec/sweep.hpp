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

#ifndef AQEC_SWEEP_HPP
#define AQEC_SWEEP_HPP

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "aqec/recovery.hpp"
#include "aqec/serialization.hpp"
#include "aqec/slope_fit.hpp"

namespace aqec {

/// Full-fidelity sweeps build an |Omega| M^2 square response; beyond this it stops being
/// a desk-scale computation.
inline constexpr std::size_t kMaxSweepEffects = 300;

struct ExperimentConfig {
    std::vector<double> gamma_grid;
    std::uint64_t seed = 0;
    int random_states = 100;
    unsigned threads = 1;
    double worst_case_tol = 1e-10;

    void validate() const {
        if (gamma_grid.empty()) {
            throw invalid_input("gamma grid is empty");
        }
        for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
            const double g = gamma_grid[i];
            if (!(g > 0.0 && g < 1.0)) {
                throw invalid_input("gamma grid value " + std::to_string(g) + " outside (0, 1)");
            }
            if (i > 0 && !(g > gamma_grid[i - 1])) {
                throw invalid_input("gamma grid must be strictly increasing");
            }
        }
        if (random_states < 0) {
            throw invalid_input("random state count must be non-negative");
        }
        if (threads < 1) {
            throw invalid_input("thread count must be >= 1");
        }
        if (!(worst_case_tol > 0.0)) {
            throw invalid_input("worst-case tolerance must be positive");
        }
    }
};

struct SweepRow {
    double gamma = 0.0;
    double eta = 0.0;
    /// Leung-type lower bound over the recovery's own effects.
    double leung_bound = 0.0;
    /// Absent when lambda_min(G) <= 0.
    std::optional<double> theorem1_bound;
    double worst_case_fidelity = 0.0;
    double fidelity_mixed_logical = 0.0;
    double worst_case_stationarity = 0.0;
    double recovery_norm = 0.0;
    double min_random_fidelity = 0.0;
    double lambda_min_G = 0.0;
    double eps_max = 0.0;
    std::vector<std::string> violations;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<LogLogFit> worst_case_infidelity_fit;
    std::optional<LogLogFit> theorem1_deficit_fit;
    std::optional<LogLogFit> eps_fit;

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        for (const auto &row : rows) {
            out.insert(out.end(), row.violations.begin(), row.violations.end());
        }
        return out;
    }
};

namespace detail {

inline std::string format_gamma_note(double gamma, const std::string &what) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "gamma=%.17g: ", gamma);
    return buf + what;
}

}  // namespace detail

/// One grid point: diagonalized-effect recovery, eta, bound checks and fidelities.
inline SweepRow evaluate_sweep_point(const PICode &code, int t, double gamma, std::uint64_t seed, std::size_t index,
                                     const ExperimentConfig &config) {
    constexpr double kBoundSlack = 1e-9;
    SweepRow row;
    row.gamma = gamma;
    const TruncatedKrausSet omega(code.num_qubits(), t, gamma);
    const GramBlockTable table = gram_blocks(code, omega);
    const KLReport report = kl_perturbation(table);
    row.lambda_min_G = report.lambda_min_G;
    row.eps_max = report.eps_max;

    RecoveryMap rm = build_truncated_recovery(table, EffectBasis::diagonalized);
    row.eta = eta_bound(rm);
    try {
        row.recovery_norm = trace_bound_check(rm);
    } catch (const bound_violated &e) {
        row.recovery_norm = std::numeric_limits<double>::quiet_NaN();
        row.violations.push_back(detail::format_gamma_note(gamma, e.what()));
    }
    row.leung_bound = leung_lower_bound(rm);
    if (report.lambda_min_G > 0.0) {
        row.theorem1_bound = theorem1_bound(report).bound;
    }

    const ChannelResponse response = channel_response_orbits(code, omega);
    const FidelityForm form = fidelity_form(response, rm);
    const WorstCaseResult worst = worst_case_fidelity(form, config.worst_case_tol);
    row.worst_case_fidelity = worst.value;
    row.worst_case_stationarity = worst.stationarity;
    row.fidelity_mixed_logical = entanglement_fidelity(response, rm, DensityOnCode::maximally_mixed(2));

    const double leung_scaled = row.leung_bound / (1.0 + row.eta);
    if (row.theorem1_bound && *row.theorem1_bound > row.worst_case_fidelity + kBoundSlack) {
        row.violations.push_back(detail::format_gamma_note(gamma, "KL fidelity bound exceeds worst-case fidelity"));
    }
    if (leung_scaled > row.worst_case_fidelity + kBoundSlack) {
        row.violations.push_back(detail::format_gamma_note(gamma, "Leung bound exceeds worst-case fidelity"));
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    row.min_random_fidelity = row.fidelity_mixed_logical;
    for (int i = 0; i < config.random_states; ++i) {
        const DensityOnCode rho = random_density(2, rng);
        const double value = entanglement_fidelity(response, rm, rho);
        row.min_random_fidelity = std::min(row.min_random_fidelity, value);
        if (leung_scaled > value + kBoundSlack) {
            row.violations.push_back(detail::format_gamma_note(gamma, "Leung bound exceeds a random-state fidelity"));
            break;
        }
    }
    return row;
}

inline std::optional<LogLogFit> try_fit(const std::vector<double> &xs, const std::vector<double> &ys) {
    if (xs.size() < 2) {
        return std::nullopt;
    }
    try {
        return fit_log_log(xs, ys);
    } catch (const invalid_input &) {
        return std::nullopt;
    }
}

/// Runs every grid point (concurrently when threads > 1); rows come back in grid order and
/// depend only on (code, grid, seed), not on scheduling.
inline SweepResult run_sweep(const PICode &code, const ExperimentConfig &config) {
    config.validate();
    const int t = code.target_order();
    if (t < 1) {
        throw invalid_input("code file has t=0; a sweep needs the truncation order t >= 1");
    }
    if (code.num_qubits() > kMaxQubits) {
        throw invalid_input("sweeps are limited to codes on at most 64 qubits");
    }
    const std::size_t effects = TruncatedKrausSet(code.num_qubits(), t, config.gamma_grid.front()).size();
    if (effects > kMaxSweepEffects) {
        throw invalid_input("full-fidelity sweep needs |Omega| <= " + std::to_string(kMaxSweepEffects) + ", got " +
                            std::to_string(effects));
    }

    const std::size_t n = config.gamma_grid.size();
    SweepResult result;
    result.rows.resize(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                result.rows[i] = evaluate_sweep_point(code, t, config.gamma_grid[i], config.seed, i, config);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::min<unsigned>(config.threads, static_cast<unsigned>(n));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::vector<double> gammas;
    std::vector<double> infidelity;
    std::vector<double> deficit;
    std::vector<double> eps;
    bool all_bounds = true;
    for (const auto &row : result.rows) {
        gammas.push_back(row.gamma);
        infidelity.push_back(1.0 - row.worst_case_fidelity);
        eps.push_back(row.eps_max);
        all_bounds = all_bounds && row.theorem1_bound.has_value();
        deficit.push_back(row.theorem1_bound ? 1.0 - *row.theorem1_bound : 0.0);
    }
    result.worst_case_infidelity_fit = try_fit(gammas, infidelity);
    result.eps_fit = try_fit(gammas, eps);
    if (all_bounds) {
        result.theorem1_deficit_fit = try_fit(gammas, deficit);
    }
    return result;
}

inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

inline std::string sweep_csv(const SweepResult &result) {
    std::string out = "gamma,eta,leung_bound,theorem1_bound,worst_case_fidelity,fidelity_mixed_logical\n";
    for (const auto &row : result.rows) {
        out += format_double(row.gamma) + ',' + format_double(row.eta) + ',' + format_double(row.leung_bound) + ',' +
               (row.theorem1_bound ? format_double(*row.theorem1_bound) : std::string("NA")) + ',' +
               format_double(row.worst_case_fidelity) + ',' + format_double(row.fidelity_mixed_logical) + '\n';
    }
    return out;
}

inline Json to_json(const LogLogFit &fit) {
    Json out{{"status", fit.status_string()}, {"points", fit.points}};
    if (fit.exact()) {
        out["slope"] = nullptr;
        out["intercept"] = nullptr;
        out["rms_residual"] = nullptr;
    } else {
        out["slope"] = fit.slope;
        out["intercept"] = fit.intercept;
        out["rms_residual"] = fit.rms_residual;
    }
    return out;
}

inline Json sweep_summary(const SweepResult &result) {
    auto fit_or_null = [](const std::optional<LogLogFit> &fit) { return fit ? to_json(*fit) : Json(nullptr); };
    double eta_max = 0.0;
    double norm_max = 0.0;
    double stationarity_max = 0.0;
    for (const auto &row : result.rows) {
        eta_max = std::max(eta_max, row.eta);
        norm_max = std::max(norm_max, row.recovery_norm);
        stationarity_max = std::max(stationarity_max, row.worst_case_stationarity);
    }
    Json violations = Json::array();
    for (const auto &v : result.violations()) {
        violations.push_back(v);
    }
    return Json{{"worst_case_infidelity", fit_or_null(result.worst_case_infidelity_fit)},
                {"theorem1_infidelity", fit_or_null(result.theorem1_deficit_fit)},
                {"eps_max", fit_or_null(result.eps_fit)},
                {"eta_max", eta_max},
                {"recovery_norm_max", norm_max},
                {"worst_case_stationarity_max", stationarity_max},
                {"violations", std::move(violations)}};
}

}  // namespace aqec

#endif
