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

#ifndef AQEC_EXACT_HPP
#define AQEC_EXACT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aqec/errors.hpp"

namespace aqec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact binomial coefficient; zero outside 0 <= k <= n.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

/// Binomial coefficient as a double. Exact below 2^53.
inline double binomial_double(int n, int k) {
    if (n < 0 || k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(result);
}

inline BigInt factorial(std::int64_t n) {
    BigInt result = 1;
    for (std::int64_t i = 2; i <= n; ++i) {
        result *= i;
    }
    return result;
}

/// Pascal triangle rows 0..n_max as doubles, for hot loops.
class BinomialTable {
  public:
    explicit BinomialTable(int n_max) : n_max_(n_max), rows_((n_max + 1) * (n_max + 1), 0.0) {
        for (int n = 0; n <= n_max; ++n) {
            rows_[index(n, 0)] = 1.0;
            for (int k = 1; k <= n; ++k) {
                rows_[index(n, k)] = rows_[index(n - 1, k - 1)] + (k < n ? rows_[index(n - 1, k)] : 0.0);
            }
        }
    }

    double operator()(int n, int k) const {
        if (n < 0 || k < 0 || k > n || n > n_max_) {
            return 0.0;
        }
        return rows_[index(n, k)];
    }

  private:
    std::size_t index(int n, int k) const { return static_cast<std::size_t>(n) * (n_max_ + 1) + k; }

    int n_max_;
    std::vector<double> rows_;
};

/// Formats as "p/q" (always with a denominator).
inline std::string to_fraction_string(const Rational &value) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    return numerator(value).str() + "/" + denominator(value).str();
}

/// Parses "p/q" or an integer "p".
inline Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view part) {
        if (part.empty()) {
            throw invalid_input("malformed rational: '" + std::string(text) + "'");
        }
        std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (start == part.size()) {
            throw invalid_input("malformed rational: '" + std::string(text) + "'");
        }
        for (std::size_t i = start; i < part.size(); ++i) {
            if (part[i] < '0' || part[i] > '9') {
                throw invalid_input("malformed rational: '" + std::string(text) + "'");
            }
        }
        return BigInt(std::string(part));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text));
    }
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) {
        throw invalid_input("zero denominator in rational: '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

inline double to_double(const Rational &value) { return value.convert_to<double>(); }

}  // namespace aqec

#endif
