// Copyright 2026 The frameness Authors
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

#pragma once

// Scalar frameness measures of standard-form pure states.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "frameness/error.hpp"
#include "frameness/states.hpp"

namespace frameness {

/// A real number or +infinity.
struct ExtendedReal {
    double value = 0.0;

    static ExtendedReal infinity() { return {std::numeric_limits<double>::infinity()}; }
    bool is_infinite() const { return std::isinf(value); }
    std::string str() const;

    bool operator==(const ExtendedReal &) const = default;
};

inline std::string ExtendedReal::str() const {
    if (is_infinite()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

inline void require_ssr(const WeightState &s, Ssr ssr, const char *what) {
    if (s.ssr() != ssr) {
        throw Error(ErrorKind::SsrMismatch, std::string(what) + " needs a " + std::string(to_string(ssr)) + " state");
    }
}

/// 2 min(p0, p1).
inline double chirality(const WeightState &s) {
    require_ssr(s, Ssr::Z2, "chirality");
    return 2.0 * std::min(s.weight(0), s.weight(1));
}

/// -log2 |p0 - p1|, infinite at |+>.
inline ExtendedReal z2_asymptotic(const WeightState &s) {
    require_ssr(s, Ssr::Z2, "z2_asymptotic");
    const double gap = std::abs(s.weight(0) - s.weight(1));
    if (gap <= tolerance()) return ExtendedReal::infinity();
    const double v = -std::log2(gap);
    return {v == 0.0 ? 0.0 : v};
}

namespace detail {

inline double scaled_variance(const WeightState &s) {
    double m1 = 0.0, m2 = 0.0;
    for (const auto &[label, p] : s.weights()) {
        const double x = label_value(s.ssr(), label);
        m1 += p * x;
        m2 += p * x * x;
    }
    return std::max(0.0, 4.0 * (m2 - m1 * m1));
}

}  // namespace detail

/// 4 Var(N); (|0> + |1>)/sqrt2 has unit variance.
inline double number_variance(const WeightState &s) {
    require_ssr(s, Ssr::U1, "number_variance");
    return detail::scaled_variance(s);
}

/// 2 <J>, with J the total angular momentum quantum number.
inline double j_mean(const WeightState &s) {
    require_ssr(s, Ssr::SU2, "j_mean");
    double m = 0.0;
    for (const auto &[tj, p] : s.weights()) m += p * tj;
    return m;
}

/// 4 Var(J).
inline double j_variance(const WeightState &s) {
    require_ssr(s, Ssr::SU2, "j_variance");
    return detail::scaled_variance(s);
}

}  // namespace frameness
