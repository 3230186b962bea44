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

#include <cmath>
#include <compare>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace frameness {

/// An integer or half-integer stored as twice its value, so that parity
/// conditions on angular momenta stay exact.
struct HalfInt {
    int twice = 0;

    static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
    static constexpr HalfInt integer(int v) { return HalfInt{2 * v}; }

    constexpr bool is_integer() const { return twice % 2 == 0; }
    constexpr double value() const { return 0.5 * twice; }

    constexpr HalfInt operator-() const { return HalfInt{-twice}; }
    constexpr HalfInt operator+(HalfInt o) const { return HalfInt{twice + o.twice}; }
    constexpr HalfInt operator-(HalfInt o) const { return HalfInt{twice - o.twice}; }
    constexpr auto operator<=>(const HalfInt &) const = default;

    /// "3/2", "-1/2", "2", "1.5" and "-0.5" are all accepted.
    static HalfInt parse(const std::string &text) {
        auto slash = text.find('/');
        std::size_t used = 0;
        try {
            if (slash != std::string::npos) {
                if (text.substr(slash + 1) != "2") {
                    throw std::invalid_argument("denominator must be 2");
                }
                int num = std::stoi(text.substr(0, slash), &used);
                if (used != slash) throw std::invalid_argument("trailing characters");
                return HalfInt{num};
            }
            double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing characters");
            double t = 2.0 * v;
            long rounded = std::lround(t);
            if (std::abs(t - static_cast<double>(rounded)) > 1e-12) {
                throw std::invalid_argument("not a multiple of 1/2");
            }
            return HalfInt{static_cast<int>(rounded)};
        } catch (const std::logic_error &e) {
            throw std::invalid_argument("cannot parse half-integer '" + text + "': " + e.what());
        }
    }

    std::string str() const {
        if (is_integer()) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }
};

inline std::ostream &operator<<(std::ostream &os, HalfInt h) { return os << h.str(); }

}  // namespace frameness
