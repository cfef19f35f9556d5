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

#ifndef AQEC_ERRORS_HPP
#define AQEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aqec {

/// Precondition or input-format violation.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The KL fidelity bound is inapplicable because G is not positive definite.
struct non_positive_lambda_min : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Some truncated effect restricted to the code is the zero operator.
struct effect_singular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A proven inequality failed numerically. Always indicates a bug.
struct bound_violated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver or eigensolver did not converge.
struct convergence_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace aqec

#endif
