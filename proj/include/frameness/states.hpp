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

// Standard-form pure resource states.
//
// Phases are removable by G-invariant unitaries, so a pure state is fully
// described by a sparse nonnegative weight vector over one charge label per
// irrep block:
//   Z2  - parity bit b in {0, 1}
//   U1  - number n >= 0
//   SU2 - twice the angular momentum, 2j >= 0, of a stretched state |j, j>
//         along a fixed axis (the axis itself is a metadata string)

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frameness/error.hpp"

namespace frameness {

enum class Ssr { Z2, U1, SU2 };

inline std::string_view to_string(Ssr ssr) {
    switch (ssr) {
        case Ssr::Z2: return "z2";
        case Ssr::U1: return "u1";
        case Ssr::SU2: return "su2";
    }
    return "?";
}

inline Ssr parse_ssr(std::string_view text) {
    if (text == "z2" || text == "Z2") return Ssr::Z2;
    if (text == "u1" || text == "U1") return Ssr::U1;
    if (text == "su2" || text == "SU2") return Ssr::SU2;
    throw Error(ErrorKind::ParseError, "unknown superselection rule '" + std::string(text) + "'");
}

using WeightMap = std::map<int, double>;

/// Mean label scale used when printing SU2 labels: label / 2 is j.
inline double label_value(Ssr ssr, int label) { return ssr == Ssr::SU2 ? 0.5 * label : label; }

class WeightState {
   public:
    WeightState() = default;

    /// Wraps weights that already satisfy the invariants; exact zeros are
    /// removed, nothing else is altered. Use normalize() for raw input.
    WeightState(Ssr ssr, WeightMap weights, std::string axis = {})
        : ssr_(ssr), weights_(std::move(weights)), axis_(std::move(axis)) {
        std::erase_if(weights_, [](const auto &kv) { return kv.second == 0.0; });
        validate();
    }

    Ssr ssr() const { return ssr_; }
    const WeightMap &weights() const { return weights_; }
    const std::string &axis() const { return axis_; }

    double weight(int label) const {
        auto it = weights_.find(label);
        return it == weights_.end() ? 0.0 : it->second;
    }

    std::size_t size() const { return weights_.size(); }
    int min_label() const { return weights_.begin()->first; }
    int max_label() const { return weights_.rbegin()->first; }

    bool operator==(const WeightState &) const = default;

   private:
    void validate() const {
        if (weights_.empty()) {
            throw Error(ErrorKind::EmptyState, "state has no nonzero weight");
        }
        double total = 0.0;
        for (const auto &[label, w] : weights_) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw Error(ErrorKind::NegativeWeight, "weight at label " + std::to_string(label) + " is not positive");
            }
            if (ssr_ == Ssr::Z2 && label != 0 && label != 1) {
                throw Error(ErrorKind::ParseError, "Z2 labels must be 0 or 1");
            }
            if (label < 0) {
                throw Error(ErrorKind::ParseError, "charge labels must be nonnegative");
            }
            total += w;
        }
        if (std::abs(total - 1.0) > tolerance()) {
            throw Error(ErrorKind::EmptyState, "weights sum to " + std::to_string(total) + ", not 1");
        }
        if (!axis_.empty() && ssr_ != Ssr::SU2) {
            throw Error(ErrorKind::ParseError, "an axis label is only meaningful for SU2 states");
        }
    }

    Ssr ssr_ = Ssr::U1;
    WeightMap weights_{{0, 1.0}};
    std::string axis_;
};

/// Canonicalizes raw weights: drops entries at or below the global tolerance
/// and rescales to unit sum. Already-normalized input passes through
/// bit-for-bit.
inline WeightState normalize(const WeightMap &raw, Ssr ssr, std::string axis = {}) {
    const double tol = tolerance();
    WeightMap kept;
    for (const auto &[label, w] : raw) {
        if (!std::isfinite(w)) {
            throw Error(ErrorKind::NegativeWeight, "weight at label " + std::to_string(label) + " is not finite");
        }
        if (w < -1e-12) {
            throw Error(ErrorKind::NegativeWeight, "weight at label " + std::to_string(label) + " is negative");
        }
        if (w > tol) kept.emplace(label, w);
    }
    if (kept.empty()) {
        throw Error(ErrorKind::EmptyState, "no weight survives the zero threshold");
    }
    double total = 0.0;
    for (const auto &kv : kept) total += kv.second;
    if (std::abs(total - 1.0) > 1e-15) {
        for (auto &kv : kept) kv.second /= total;
    }
    return WeightState(ssr, std::move(kept), std::move(axis));
}

/// Rescales positive weights to unit sum without thresholding.
inline WeightState renormalized(Ssr ssr, WeightMap weights, std::string axis = {}) {
    std::erase_if(weights, [](const auto &kv) { return !(kv.second > 0.0); });
    if (weights.empty()) throw Error(ErrorKind::EmptyState, "no positive weight");
    double total = 0.0;
    for (const auto &kv : weights) total += kv.second;
    if (std::abs(total - 1.0) > 1e-15) {
        for (auto &kv : weights) kv.second /= total;
    }
    return WeightState(ssr, std::move(weights), std::move(axis));
}

struct Spectrum {
    std::vector<int> labels;  // strictly ascending
    std::size_t cardinality() const { return labels.size(); }
};

inline Spectrum spectrum(const WeightState &s) {
    Spectrum out;
    out.labels.reserve(s.size());
    for (const auto &kv : s.weights()) out.labels.push_back(kv.first);
    return out;
}

/// Label step between adjacent spectrum entries that counts as "no gap":
/// one quantum for numbers and parities, j -> j + 1 for SU2.
inline int unit_step(Ssr ssr) { return ssr == Ssr::SU2 ? 2 : 1; }

inline bool is_gapless(const WeightState &s) {
    const int step = unit_step(s.ssr());
    int prev = s.min_label();
    for (const auto &[label, w] : s.weights()) {
        if (label != prev && label - prev != step) return false;
        prev = label;
    }
    return true;
}

inline bool is_resource(const WeightState &s) {
    if (s.size() >= 2) return true;
    return s.ssr() == Ssr::SU2 && s.min_label() > 0;
}

/// Greatest common divisor of all differences from the lowest label; 0 for
/// a single-label state.
inline int support_gcd(const WeightState &s) {
    int g = 0;
    for (const auto &kv : s.weights()) g = std::gcd(g, kv.first - s.min_label());
    return g;
}

/// Product state in standard form: weights convolve, parities add mod 2.
inline WeightState tensor(const WeightState &a, const WeightState &b) {
    if (a.ssr() != b.ssr()) {
        throw Error(ErrorKind::SsrMismatch, "cannot tensor states of different superselection rules");
    }
    WeightMap out;
    for (const auto &[la, wa] : a.weights()) {
        for (const auto &[lb, wb] : b.weights()) {
            int label = a.ssr() == Ssr::Z2 ? (la + lb) % 2 : la + lb;
            out[label] += wa * wb;
        }
    }
    std::string axis = a.axis().empty() ? b.axis() : a.axis();
    return renormalized(a.ssr(), std::move(out), std::move(axis));
}

/// Rigid translation of every label by `shift` (Z2: xor). Labels pushed
/// below zero are an error.
inline WeightState shifted(const WeightState &s, int shift) {
    WeightMap out;
    for (const auto &[label, w] : s.weights()) {
        int target = s.ssr() == Ssr::Z2 ? (label ^ (shift & 1)) : label + shift;
        if (target < 0) {
            throw Error(ErrorKind::IllegalShift, "shift moves a populated label below zero");
        }
        out.emplace(target, w);
    }
    return WeightState(s.ssr(), std::move(out), s.axis());
}

}  // namespace frameness
