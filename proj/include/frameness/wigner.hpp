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

// Wigner 3j symbols and Clebsch-Gordan coefficients.
//
// Every Racah sum is evaluated in exact big-integer arithmetic; the only
// floating-point steps are one division and one square root at the very end.
// Results are memoised under the 72-element Regge symmetry group, so each
// distinct symbol is computed once per process.

#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "frameness/half_int.hpp"

namespace frameness::wigner {

struct ThreeJArgs {
    HalfInt j1, j2, j3;
    HalfInt m1, m2, m3;
};

namespace detail {

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline constexpr int kMaxFactorial = 1200;

inline const std::vector<BigInt> &factorial_table() {
    static const std::vector<BigInt> table = [] {
        std::vector<BigInt> t(kMaxFactorial + 1);
        t[0] = 1;
        for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table;
}

inline const BigInt &factorial(int n) {
    if (n < 0 || n > kMaxFactorial) {
        throw std::out_of_range("factorial argument out of range for the 3j kernel");
    }
    return factorial_table()[n];
}

// Product n!/m! for m <= n as an exact integer.
inline BigInt falling_ratio(int n, int m) {
    BigInt r = 1;
    for (int i = m + 1; i <= n; ++i) r *= i;
    return r;
}

inline bool selection_rules_hold(const ThreeJArgs &a) {
    const int j[3] = {a.j1.twice, a.j2.twice, a.j3.twice};
    const int m[3] = {a.m1.twice, a.m2.twice, a.m3.twice};
    for (int i = 0; i < 3; ++i) {
        if (j[i] < 0) return false;
        if (std::abs(m[i]) > j[i]) return false;
        if ((j[i] - m[i]) % 2 != 0) return false;
    }
    if (m[0] + m[1] + m[2] != 0) return false;
    if ((j[0] + j[1] + j[2]) % 2 != 0) return false;
    if (j[2] < std::abs(j[0] - j[1]) || j[2] > j[0] + j[1]) return false;
    return true;
}

// Racah formula for a symbol that passes every selection rule. All quantities
// below are integers because the parity rules hold.
inline double racah(const ThreeJArgs &a) {
    const int j1 = a.j1.twice, j2 = a.j2.twice, j3 = a.j3.twice;
    const int m1 = a.m1.twice, m2 = a.m2.twice, m3 = a.m3.twice;
    // A zero angular momentum has the closed form (-1)^(j - m) / sqrt(2j + 1),
    // with (j, m) taken cyclically after the zero.
    if (j1 == 0 || j2 == 0 || j3 == 0) {
        const int tj = j3 == 0 ? j1 : j1 == 0 ? j2 : j3;
        const int tm = j3 == 0 ? m1 : j1 == 0 ? m2 : m3;
        const double magnitude = boost::multiprecision::sqrt(BigFloat(1) / BigFloat(tj + 1)).convert_to<double>();
        return ((tj - tm) / 2) % 2 == 0 ? magnitude : -magnitude;
    }
    const int t_a = (j1 + j2 - j3) / 2;
    const int t_b = (j1 - j2 + j3) / 2;
    const int t_c = (-j1 + j2 + j3) / 2;
    const int big_j = (j1 + j2 + j3) / 2;

    const int x1 = (j3 - j2 + m1) / 2;   // k + x1 >= 0
    const int x2 = (j3 - j1 - m2) / 2;   // k + x2 >= 0
    const int y1 = t_a;                  // y1 - k >= 0
    const int y2 = (j1 - m1) / 2;        // y2 - k >= 0
    const int y3 = (j2 + m2) / 2;        // y3 - k >= 0
    const int kmin = std::max({0, -x1, -x2});
    const int kmax = std::min({y1, y2, y3});

    // Common denominator L = kmax! (kmax+x1)! (kmax+x2)! (y1-kmin)! (y2-kmin)! (y3-kmin)!;
    // each term's L/denominator is then an exact integer.
    BigInt numerator = 0;
    for (int k = kmin; k <= kmax; ++k) {
        BigInt term = falling_ratio(kmax, k) * falling_ratio(kmax + x1, k + x1) *
                      falling_ratio(kmax + x2, k + x2) * falling_ratio(y1 - kmin, y1 - k) *
                      falling_ratio(y2 - kmin, y2 - k) * falling_ratio(y3 - kmin, y3 - k);
        if (k % 2 == 0) {
            numerator += term;
        } else {
            numerator -= term;
        }
    }
    if (numerator == 0) return 0.0;
    BigInt denom_l = factorial(kmax) * factorial(kmax + x1) * factorial(kmax + x2) *
                     factorial(y1 - kmin) * factorial(y2 - kmin) * factorial(y3 - kmin);

    // value^2 = numerator^2 * a! b! c! prod (j +- m)! / ((J+1)! L^2)
    BigInt sq_num = numerator * numerator * factorial(t_a) * factorial(t_b) * factorial(t_c) *
                    factorial((j1 + m1) / 2) * factorial((j1 - m1) / 2) * factorial((j2 + m2) / 2) *
                    factorial((j2 - m2) / 2) * factorial((j3 + m3) / 2) * factorial((j3 - m3) / 2);
    BigInt sq_den = factorial(big_j + 1) * denom_l * denom_l;

    BigFloat magnitude = boost::multiprecision::sqrt(BigFloat(sq_num) / BigFloat(sq_den));
    double value = magnitude.convert_to<double>();
    const int phase = (j1 - j2 - m3) / 2;  // (-1)^(j1-j2-m3)
    bool negative = (numerator < 0) != (((phase % 2) + 2) % 2 == 1);
    return negative ? -value : value;
}

using ReggeSquare = std::array<int, 9>;

inline ReggeSquare regge_square(const ThreeJArgs &a) {
    const int j1 = a.j1.twice, j2 = a.j2.twice, j3 = a.j3.twice;
    const int m1 = a.m1.twice, m2 = a.m2.twice, m3 = a.m3.twice;
    return {(-j1 + j2 + j3) / 2, (j1 - j2 + j3) / 2, (j1 + j2 - j3) / 2,
            (j1 - m1) / 2,       (j2 - m2) / 2,      (j3 - m3) / 2,
            (j1 + m1) / 2,       (j2 + m2) / 2,      (j3 + m3) / 2};
}

inline ThreeJArgs from_regge_square(const ReggeSquare &r) {
    ThreeJArgs a;
    a.j1 = HalfInt::from_twice(r[3] + r[6]);
    a.j2 = HalfInt::from_twice(r[4] + r[7]);
    a.j3 = HalfInt::from_twice(r[5] + r[8]);
    a.m1 = HalfInt::from_twice(r[6] - r[3]);
    a.m2 = HalfInt::from_twice(r[7] - r[4]);
    a.m3 = HalfInt::from_twice(r[8] - r[5]);
    return a;
}

struct Canonical {
    ReggeSquare square;
    bool flip_sign;
};

// Lexicographically smallest image under row/column permutations and
// transposition. Odd row or column permutations contribute (-1)^J each.
inline Canonical canonicalize(const ReggeSquare &r) {
    static constexpr int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    const int big_j = r[0] + r[1] + r[2];
    Canonical best{r, false};
    for (int transpose = 0; transpose < 2; ++transpose) {
        for (int rp = 0; rp < 6; ++rp) {
            for (int cp = 0; cp < 6; ++cp) {
                ReggeSquare s;
                for (int i = 0; i < 3; ++i) {
                    for (int k = 0; k < 3; ++k) {
                        int row = perms[rp][i], col = perms[cp][k];
                        s[3 * i + k] = transpose ? r[3 * col + row] : r[3 * row + col];
                    }
                }
                if (s < best.square) {
                    int odd = (rp >= 3 ? 1 : 0) + (cp >= 3 ? 1 : 0);
                    best = Canonical{s, (odd % 2 == 1) && (big_j % 2 == 1)};
                }
            }
        }
    }
    return best;
}

struct SquareHash {
    std::size_t operator()(const ReggeSquare &s) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (int v : s) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

class ThreeJCache {
   public:
    double get(const ThreeJArgs &a) {
        Canonical c = canonicalize(regge_square(a));
        {
            std::shared_lock lock(mutex_);
            auto it = table_.find(c.square);
            if (it != table_.end()) return c.flip_sign ? -it->second : it->second;
        }
        double v = racah(from_regge_square(c.square));
        {
            std::unique_lock lock(mutex_);
            table_.emplace(c.square, v);
        }
        return c.flip_sign ? -v : v;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return table_.size();
    }

   private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<ReggeSquare, double, SquareHash> table_;
};

inline ThreeJCache &cache() {
    static ThreeJCache instance;
    return instance;
}

}  // namespace detail

/// Wigner 3j symbol. Any violated selection rule gives exactly 0.
inline double three_j(const ThreeJArgs &args) {
    if (!detail::selection_rules_hold(args)) return 0.0;
    return detail::cache().get(args);
}

inline double three_j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
    return three_j(ThreeJArgs{j1, j2, j3, m1, m2, m3});
}

/// Uncached evaluation, used to cross-check the memo.
inline double three_j_uncached(const ThreeJArgs &args) {
    if (!detail::selection_rules_hold(args)) return 0.0;
    return detail::racah(args);
}

/// <j1 m1; j2 m2 | j m> in the Condon-Shortley convention, related to the 3j
/// symbol by (j1 j2 j; m1 m2 -m) = (-1)^(j1-j2+m) / sqrt(2j+1) <j1 m1; j2 m2 | j m>.
inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j, HalfInt m) {
    if (m.twice != m1.twice + m2.twice) return 0.0;
    double tj = three_j(j1, j2, j, m1, m2, -m);
    if (tj == 0.0) return 0.0;
    const int phase = (j1.twice - j2.twice + m.twice) / 2;
    double sign = (((phase % 2) + 2) % 2 == 1) ? -1.0 : 1.0;
    return sign * std::sqrt(static_cast<double>(j.twice + 1)) * tj;
}

inline std::size_t cache_size() { return detail::cache().size(); }

}  // namespace frameness::wigner
