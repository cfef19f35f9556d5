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

#ifndef AQEC_SERIALIZATION_HPP
#define AQEC_SERIALIZATION_HPP

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "aqec/code_space.hpp"
#include "aqec/errors.hpp"
#include "aqec/exact.hpp"
#include "aqec/perturbed_kl.hpp"
#include "aqec/pi_ad_codes.hpp"

namespace aqec {

using Json = nlohmann::ordered_json;

// PI code files: {"m": int, "t": int, "weights": {"0": {"b": "p/q", ...}, "1": {...}}}.

inline Json to_json(const PICode &code) {
    Json weights = Json::object();
    for (int j = 0; j < 2; ++j) {
        Json row = Json::object();
        for (const auto &[b, w] : code.row(j)) {
            row[std::to_string(b)] = to_fraction_string(w);
        }
        weights[std::to_string(j)] = std::move(row);
    }
    return Json{{"m", code.num_qubits()}, {"t", code.target_order()}, {"weights", std::move(weights)}};
}

inline PICode pi_code_from_json(const Json &doc) {
    try {
        if (!doc.is_object()) {
            throw invalid_input("code file must hold a JSON object");
        }
        const int m = doc.at("m").get<int>();
        const int t = doc.at("t").get<int>();
        const Json &weights = doc.at("weights");
        std::array<PICode::WeightRow, 2> rows;
        for (int j = 0; j < 2; ++j) {
            for (const auto &[key, value] : weights.at(std::to_string(j)).items()) {
                int b = 0;
                const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), b);
                if (ec != std::errc{} || end != key.data() + key.size()) {
                    throw invalid_input("weight key '" + key + "' is not an integer");
                }
                if (!value.is_string()) {
                    throw invalid_input("weight at b=" + key + " must be a \"p/q\" string");
                }
                rows[static_cast<std::size_t>(j)][b] = parse_rational(value.get<std::string>());
            }
        }
        return PICode(m, t, std::move(rows));
    } catch (const nlohmann::json::exception &e) {
        throw invalid_input(std::string("malformed code file: ") + e.what());
    } catch (const std::out_of_range &e) {
        throw invalid_input(std::string("malformed code file: ") + e.what());
    }
}

inline Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw invalid_input("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw invalid_input("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw invalid_input("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw invalid_input("write to '" + path + "' failed");
    }
}

inline PICode read_pi_code(const std::string &path) {
    try {
        return pi_code_from_json(read_json_file(path));
    } catch (const invalid_input &e) {
        throw invalid_input(path + ": " + e.what());
    }
}

inline void write_pi_code(const PICode &code, const std::string &path) { write_text_file(path, to_json(code).dump(2) + "\n"); }

/// {"gamma", "eps_max", "lambda_min_G", "trace_G", "theorem1_bound"}; the bound is null when
/// lambda_min(G) <= 0.
inline Json to_json(const KLReport &report) {
    Json bound = nullptr;
    if (report.lambda_min_G > 0.0) {
        bound = theorem1_bound(report).bound;
    }
    return Json{{"gamma", report.gamma},
                {"eps_max", report.eps_max},
                {"lambda_min_G", report.lambda_min_G},
                {"trace_G", report.trace_G},
                {"theorem1_bound", bound}};
}

inline Json to_json(const MomentTable &moments) {
    Json out = Json::object();
    for (int j = 0; j < 2; ++j) {
        Json rows = Json::array();
        for (int c = 0; c <= moments.order(); ++c) {
            Json row = Json::array();
            for (int l = 0; l <= 2 * moments.order(); ++l) {
                row.push_back(to_fraction_string(moments(j, c, l)));
            }
            rows.push_back(std::move(row));
        }
        out[std::to_string(j)] = std::move(rows);
    }
    return out;
}

struct CertificationReport {
    int t = 0;
    int m = 0;
    Lemma4Certificate lemma4;
    bool cross_terms_zero = false;
    /// Absent when the effect set is too large for the closed-form table.
    std::optional<LogLogFit> eps_fit;

    bool passed() const { return lemma4.certified() && cross_terms_zero; }
};

inline Json to_json(const CertificationReport &report) {
    Json violation = nullptr;
    if (report.lemma4.first_violation) {
        violation = Json{{"c", report.lemma4.first_violation->first}, {"l", report.lemma4.first_violation->second}};
    }
    Json slope = nullptr;
    if (report.eps_fit && !report.eps_fit->exact()) {
        slope = report.eps_fit->slope;
    }
    return Json{{"t", report.t},
                {"m", report.m},
                {"lemma4", report.lemma4.certified()},
                {"moment_table", to_json(report.lemma4.moments)},
                {"cross_terms_zero", report.cross_terms_zero},
                {"eps_slope", slope},
                {"moments_equal", report.lemma4.moments_equal},
                {"tail_empty", report.lemma4.tail_empty},
                {"first_violation", violation}};
}

}  // namespace aqec

#endif
