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

#ifndef AQEC_CERTIFICATION_HPP
#define AQEC_CERTIFICATION_HPP

#include "aqec/order_fit.hpp"
#include "aqec/pi_ad_codes.hpp"
#include "aqec/serialization.hpp"

namespace aqec {

/// Exact moment and cross-term certificates plus the measured eps order at order t.
inline CertificationReport certify_pi_code(const PICode &code, int t) {
    if (t < 1) {
        throw invalid_input("certification order t must be >= 1, got " + std::to_string(t));
    }
    CertificationReport report{t, code.num_qubits(), lemma4_certify(code, t), cross_terms_zero(code, t), std::nullopt};
    if (truncated_set_size(code.num_qubits(), t) <= kMaxOrderFitEffects) {
        const auto grid = default_epsilon_grid(t);
        report.eps_fit = epsilon_order_fit(code, t, grid).fit;
    }
    return report;
}

}  // namespace aqec

#endif
