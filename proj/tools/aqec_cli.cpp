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

// Command-line driver: code generation, exact certification, fidelity sweeps and
// identity checks. Exit codes: 0 ok, 2 configuration error, 3 certification failure,
// 4 numerical-bound violation.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aqec/certification.hpp"
#include "aqec/errors.hpp"
#include "aqec/pi_ad_codes.hpp"
#include "aqec/serialization.hpp"
#include "aqec/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCertification = 3;
constexpr int kExitBound = 4;

int gen_code(int t, const std::string &out) {
    if (t < 1) {
        throw aqec::invalid_input("--t must be >= 1, got " + std::to_string(t));
    }
    // The constructor checks normalization and support exactly.
    const aqec::PICode code = aqec::build_pi_code(t);
    aqec::write_pi_code(code, out);
    std::cout << "wrote " << out << ": m=" << code.num_qubits() << " t=" << code.target_order() << "\n";
    return kExitOk;
}

int certify(const std::string &path, int t, const std::string &out) {
    const aqec::PICode code = aqec::read_pi_code(path);
    const aqec::CertificationReport report = aqec::certify_pi_code(code, t);
    const std::string text = aqec::to_json(report).dump(2) + "\n";
    if (!out.empty()) {
        aqec::write_text_file(out, text);
    }
    std::cout << text;
    return report.passed() ? kExitOk : kExitCertification;
}

int sweep(const std::string &path, const std::vector<double> &gammas, std::uint64_t seed, const std::string &dir,
          unsigned threads, int random_states) {
    const aqec::PICode code = aqec::read_pi_code(path);
    aqec::ExperimentConfig config;
    config.gamma_grid = gammas;
    config.seed = seed;
    config.threads = threads;
    config.random_states = random_states;
    config.validate();

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw aqec::invalid_input("cannot create output directory '" + dir + "': " + ec.message());
    }
    const aqec::SweepResult result = aqec::run_sweep(code, config);
    const std::filesystem::path base(dir);
    aqec::write_text_file((base / "sweep.csv").string(), aqec::sweep_csv(result));
    const aqec::Json summary = aqec::sweep_summary(result);
    aqec::write_text_file((base / "summary.json").string(), summary.dump(2) + "\n");

    auto slope_line = [](const char *name, const std::optional<aqec::LogLogFit> &fit) {
        std::cout << name << ": ";
        if (!fit) {
            std::cout << "n/a\n";
        } else if (fit->exact()) {
            std::cout << "exact\n";
        } else {
            std::cout << "slope " << aqec::format_double(fit->slope) << "\n";
        }
    };
    std::cout << "wrote " << (base / "sweep.csv").string() << " and " << (base / "summary.json").string() << "\n";
    slope_line("worst-case infidelity", result.worst_case_infidelity_fit);
    slope_line("KL-bound infidelity", result.theorem1_deficit_fit);
    slope_line("eps_max", result.eps_fit);
    const auto violations = result.violations();
    for (const auto &v : violations) {
        std::cerr << "bound violation: " << v << "\n";
    }
    return violations.empty() ? kExitOk : kExitBound;
}

int verify_identities(int max_n, int max_m) {
    if (max_n < 1 || max_m < 0) {
        throw aqec::invalid_input("--max-n must be >= 1 and --max-m >= 0");
    }
    const auto lemma5 = aqec::verify_lemma5_range(max_n);
    const auto ratio = aqec::verify_binomial_ratio_range(max_m);
    const aqec::Json report{
        {"alternating_sum", {{"max_n", lemma5.max_n}, {"checked", lemma5.checked}, {"failures", lemma5.failures},
                             {"boundary_failures", lemma5.boundary_failures}}},
        {"binomial_ratio", {{"max_m", ratio.max_m}, {"checked", ratio.checked},
                            {"corrected_failures", ratio.corrected_failures},
                            {"printed_disagreements", ratio.printed_disagreements},
                            {"printed_disagreements_c0", ratio.printed_disagreements_c0}}}};
    std::cout << report.dump(2) << "\n";
    const bool ok = lemma5.failures == 0 && lemma5.boundary_failures == 0 && ratio.corrected_failures == 0;
    return ok ? kExitOk : kExitCertification;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Approximate quantum error correction for amplitude damping"};
    app.require_subcommand(1);

    int gen_t = 0;
    std::string gen_out;
    auto *gen = app.add_subcommand("gen-code", "Write the permutation-invariant code of order t as JSON");
    gen->add_option("--t", gen_t, "Order t >= 1")->required();
    gen->add_option("--out", gen_out, "Output path")->required();

    std::string cert_code;
    int cert_t = 0;
    std::string cert_out;
    auto *cert = app.add_subcommand("certify", "Exact moment and cross-term certificates for a code file");
    cert->add_option("--code", cert_code, "Code JSON file")->required();
    cert->add_option("--t", cert_t, "Order t >= 1")->required();
    cert->add_option("--out", cert_out, "Also write the report here");

    std::string sweep_code;
    std::vector<double> sweep_gammas;
    std::uint64_t sweep_seed = 0;
    std::string sweep_out;
    unsigned sweep_threads = 1;
    int sweep_states = 100;
    auto *sw = app.add_subcommand("sweep", "Bounds and fidelities over a gamma grid");
    sw->add_option("--code", sweep_code, "Code JSON file")->required();
    sw->add_option("--gammas", sweep_gammas, "Comma-separated, strictly increasing grid in (0,1)")
        ->required()
        ->delimiter(',');
    sw->add_option("--seed", sweep_seed, "Seed for random logical states")->required();
    sw->add_option("--out", sweep_out, "Output directory")->required();
    sw->add_option("--threads", sweep_threads, "Worker threads over grid points")->capture_default_str();
    sw->add_option("--random-states", sweep_states, "Random states per grid point")->capture_default_str();

    int max_n = 50;
    int max_m = 20;
    auto *ids = app.add_subcommand("verify-identities", "Exhaustive exact checks of the combinatorial identities");
    ids->add_option("--max-n", max_n, "Largest n for the alternating binomial sum")->capture_default_str();
    ids->add_option("--max-m", max_m, "Largest m for the binomial ratio identity")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*gen) {
            return gen_code(gen_t, gen_out);
        }
        if (*cert) {
            return certify(cert_code, cert_t, cert_out);
        }
        if (*sw) {
            return sweep(sweep_code, sweep_gammas, sweep_seed, sweep_out, sweep_threads, sweep_states);
        }
        return verify_identities(max_n, max_m);
    } catch (const aqec::invalid_input &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const aqec::bound_violated &e) {
        std::cerr << "bound violation: " << e.what() << "\n";
        return kExitBound;
    } catch (const aqec::convergence_failure &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitBound;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
