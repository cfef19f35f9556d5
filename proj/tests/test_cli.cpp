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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "aqec/certification.hpp"
#include "aqec/serialization.hpp"
#include "aqec/sweep.hpp"

namespace aqec {
namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

// Runs the CLI with stdout and stderr merged.
RunResult run_cli(const std::string &args) {
    const std::string command = std::string("'") + AQEC_CLI_PATH + "' " + args + " 2>&1";
    RunResult result;
    FILE *pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        return result;
    }
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
        result.output.append(buf, got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::path(AQEC_TEST_TMPDIR) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string quoted(const fs::path &p) { return "'" + p.string() + "'"; }

// JSON object after any leading non-JSON lines.
Json parse_stdout(const std::string &text) { return Json::parse(text.substr(text.find('{'))); }

TEST(Serialization, PICodeRoundTrip) {
    for (int t = 1; t <= 3; ++t) {
        const PICode code = build_pi_code(t);
        const PICode back = pi_code_from_json(Json::parse(to_json(code).dump()));
        EXPECT_EQ(back.num_qubits(), code.num_qubits());
        EXPECT_EQ(back.target_order(), t);
        for (int j = 0; j < 2; ++j) {
            EXPECT_EQ(back.row(j), code.row(j));
        }
    }
}

TEST(Serialization, PICodeLayout) {
    const Json doc = to_json(build_pi_code(1));
    EXPECT_EQ(doc.at("m"), 13);
    EXPECT_EQ(doc.at("t"), 1);
    EXPECT_TRUE(doc.at("weights").at("0").is_object());
    for (const auto &[key, value] : doc.at("weights").at("1").items()) {
        EXPECT_TRUE(value.is_string()) << key;
    }
}

TEST(Serialization, RejectsMalformedCodes) {
    EXPECT_THROW(pi_code_from_json(Json::parse(R"({"m": 3})")), invalid_input);
    EXPECT_THROW(pi_code_from_json(Json::parse(R"([1, 2])")), invalid_input);
    EXPECT_THROW(pi_code_from_json(Json::parse(R"({"m": 1, "t": 0, "weights": {"0": {"x": "1"}, "1": {"1": "1"}}})")),
                 invalid_input);
    EXPECT_THROW(pi_code_from_json(Json::parse(R"({"m": 1, "t": 0, "weights": {"0": {"0": 1}, "1": {"1": "1"}}})")),
                 invalid_input);
    // Weights that do not sum to one.
    EXPECT_THROW(pi_code_from_json(Json::parse(R"({"m": 1, "t": 0, "weights": {"0": {"0": "1/2"}, "1": {"1": "1"}}})")),
                 invalid_input);
}

TEST(Serialization, KLReportKeys) {
    const PICode code = build_pi_code(1);
    const auto report = kl_perturbation(gram_blocks(code, truncated_kraus_set(13, 1, 0.01)));
    const Json doc = to_json(report);
    std::vector<std::string> keys;
    for (const auto &[key, value] : doc.items()) {
        keys.push_back(key);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"gamma", "eps_max", "lambda_min_G", "trace_G", "theorem1_bound"}));
    EXPECT_DOUBLE_EQ(doc.at("gamma").get<double>(), 0.01);
    EXPECT_TRUE(doc.at("theorem1_bound").is_number());

    KLReport degenerate;
    degenerate.lambda_min_G = 0.0;
    EXPECT_TRUE(to_json(degenerate).at("theorem1_bound").is_null());
}

TEST(Serialization, CertificationReportKeys) {
    const Json doc = to_json(certify_pi_code(build_pi_code(1), 1));
    for (const char *key : {"t", "m", "lemma4", "moment_table", "cross_terms_zero", "eps_slope", "moments_equal",
                            "tail_empty", "first_violation"}) {
        EXPECT_TRUE(doc.contains(key)) << key;
    }
    EXPECT_EQ(doc.at("moment_table").at("0").at(0).at(1), "6/1");
    EXPECT_TRUE(doc.at("first_violation").is_null());
}

TEST(SweepConfig, Validation) {
    ExperimentConfig config;
    EXPECT_THROW(config.validate(), invalid_input);
    config.gamma_grid = {0.01, 0.001};
    EXPECT_THROW(config.validate(), invalid_input);
    config.gamma_grid = {0.0, 0.01};
    EXPECT_THROW(config.validate(), invalid_input);
    config.gamma_grid = {0.01, 1.0};
    EXPECT_THROW(config.validate(), invalid_input);
    config.gamma_grid = {0.001, 0.01};
    EXPECT_NO_THROW(config.validate());
    config.threads = 0;
    EXPECT_THROW(config.validate(), invalid_input);
}

TEST(SweepCsv, HeaderAndMissingBound) {
    SweepResult result;
    SweepRow row;
    row.gamma = 0.5;
    result.rows.push_back(row);
    EXPECT_EQ(sweep_csv(result),
              "gamma,eta,leung_bound,theorem1_bound,worst_case_fidelity,fidelity_mixed_logical\n0.5,0,0,NA,0,0\n");
}

TEST(RunSweep, ThreadCountDoesNotChangeResults) {
    ExperimentConfig config;
    config.gamma_grid = {0.002, 0.01, 0.05};
    config.seed = 11;
    config.random_states = 5;
    const PICode code = build_pi_code(1);
    const std::string serial = sweep_csv(run_sweep(code, config));
    config.threads = 3;
    EXPECT_EQ(sweep_csv(run_sweep(code, config)), serial);
}

TEST(RunSweep, RejectsLargeEffectSets) {
    ExperimentConfig config;
    config.gamma_grid = {0.01};
    EXPECT_THROW(run_sweep(build_pi_code(2), config), invalid_input);
}

TEST(Cli, GenCodeWritesCertifiableFiles) {
    const fs::path dir = scratch("gen");
    for (int t = 1; t <= 2; ++t) {
        const fs::path file = dir / ("code_t" + std::to_string(t) + ".json");
        const auto gen = run_cli("gen-code --t " + std::to_string(t) + " --out " + quoted(file));
        ASSERT_EQ(gen.exit_code, 0) << gen.output;
        const PICode code = read_pi_code(file.string());
        EXPECT_EQ(code.target_order(), t);
        const PICode expected = build_pi_code(t);
        EXPECT_EQ(code.row(0), expected.row(0));
        EXPECT_EQ(code.row(1), expected.row(1));
    }
}

TEST(Cli, GenCodeRejectsOrderZero) {
    const fs::path dir = scratch("gen_zero");
    const auto r = run_cli("gen-code --t 0 --out " + quoted(dir / "c.json"));
    EXPECT_EQ(r.exit_code, 2) << r.output;
    EXPECT_FALSE(fs::exists(dir / "c.json"));
}

TEST(Cli, MissingArgumentsAreConfigErrors) {
    EXPECT_EQ(run_cli("").exit_code, 2);
    EXPECT_EQ(run_cli("gen-code --t 1").exit_code, 2);
    EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
    EXPECT_EQ(run_cli("--help").exit_code, 0);
}

TEST(Cli, CertifyPassesForGeneratedCode) {
    const fs::path dir = scratch("certify_ok");
    const fs::path file = dir / "code.json";
    ASSERT_EQ(run_cli("gen-code --t 1 --out " + quoted(file)).exit_code, 0);
    const auto r = run_cli("certify --code " + quoted(file) + " --t 1 --out " + quoted(dir / "report.json"));
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const Json doc = parse_stdout(r.output);
    EXPECT_TRUE(doc.at("lemma4").get<bool>());
    EXPECT_TRUE(doc.at("cross_terms_zero").get<bool>());
    EXPECT_GE(doc.at("eps_slope").get<double>(), 1.9);
    EXPECT_EQ(Json::parse(slurp(dir / "report.json")), doc);
}

TEST(Cli, CertifyFailsForPerturbedCode) {
    const fs::path dir = scratch("certify_bad");
    Json doc = to_json(build_pi_code(1));
    auto &row = doc.at("weights").at("1");
    // Move 1/100 of the weight from the first level of row 1 to the second.
    auto it = row.begin();
    const Rational first = parse_rational(it->get<std::string>());
    ++it;
    const Rational second = parse_rational(it->get<std::string>());
    row.begin().value() = to_fraction_string(first - Rational(1, 100));
    it.value() = to_fraction_string(second + Rational(1, 100));
    const fs::path file = dir / "code.json";
    write_text_file(file.string(), doc.dump());
    const auto r = run_cli("certify --code " + quoted(file) + " --t 1");
    EXPECT_EQ(r.exit_code, 3) << r.output;
    const Json report = parse_stdout(r.output);
    EXPECT_FALSE(report.at("lemma4").get<bool>());
    EXPECT_EQ(report.at("first_violation"), (Json{{"c", 0}, {"l", 1}}));
}

TEST(Cli, CertifyMissingFileNamesThePath) {
    const fs::path missing = scratch("certify_missing") / "nope.json";
    const auto r = run_cli("certify --code " + quoted(missing) + " --t 1");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.output.find(missing.string()), std::string::npos) << r.output;
}

TEST(Cli, SweepIsDeterministic) {
    const fs::path dir = scratch("sweep");
    const fs::path code = dir / "code.json";
    ASSERT_EQ(run_cli("gen-code --t 1 --out " + quoted(code)).exit_code, 0);
    const std::string common = "sweep --code " + quoted(code) + " --gammas 0.001,0.003,0.01,0.03 --seed 7 --random-states 10";
    const auto a = run_cli(common + " --out " + quoted(dir / "a"));
    ASSERT_EQ(a.exit_code, 0) << a.output;
    const auto b = run_cli(common + " --threads 2 --out " + quoted(dir / "b"));
    ASSERT_EQ(b.exit_code, 0) << b.output;
    const std::string csv = slurp(dir / "a" / "sweep.csv");
    EXPECT_EQ(csv, slurp(dir / "b" / "sweep.csv"));
    EXPECT_EQ(slurp(dir / "a" / "summary.json"), slurp(dir / "b" / "summary.json"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "gamma,eta,leung_bound,theorem1_bound,worst_case_fidelity,fidelity_mixed_logical");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
    const Json summary = Json::parse(slurp(dir / "a" / "summary.json"));
    EXPECT_TRUE(summary.at("violations").empty());
    EXPECT_GE(summary.at("worst_case_infidelity").at("slope").get<double>(), 1.8);
}

TEST(Cli, SweepRejectsBadGrid) {
    const fs::path dir = scratch("sweep_bad");
    const fs::path code = dir / "code.json";
    ASSERT_EQ(run_cli("gen-code --t 1 --out " + quoted(code)).exit_code, 0);
    EXPECT_EQ(run_cli("sweep --code " + quoted(code) + " --gammas 0,0.01 --seed 1 --out " + quoted(dir / "o")).exit_code,
              2);
    EXPECT_EQ(
        run_cli("sweep --code " + quoted(code) + " --gammas 0.1,0.01 --seed 1 --out " + quoted(dir / "o")).exit_code, 2);
    EXPECT_EQ(
        run_cli("sweep --code " + quoted(code) + " --gammas abc --seed 1 --out " + quoted(dir / "o")).exit_code, 2);
}

TEST(Cli, VerifyIdentities) {
    const auto r = run_cli("verify-identities --max-n 50 --max-m 20");
    ASSERT_EQ(r.exit_code, 0) << r.output;
    const Json doc = parse_stdout(r.output);
    EXPECT_EQ(doc.at("alternating_sum").at("failures"), 0);
    EXPECT_EQ(doc.at("alternating_sum").at("boundary_failures"), 0);
    EXPECT_EQ(doc.at("binomial_ratio").at("corrected_failures"), 0);
    EXPECT_GT(doc.at("binomial_ratio").at("printed_disagreements").get<long long>(), 0);
    EXPECT_EQ(run_cli("verify-identities --max-n 0").exit_code, 2);
}

}  // namespace
}  // namespace aqec
