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

// Shared generators for the unit tests.

#pragma once

#include <random>

#include "frameness/states.hpp"

namespace frameness::testing_support {

/// A source that converts deterministically into `target`: the target
/// smeared by a random mixture of label-raising shifts.
inline WeightState smeared_source(const WeightState &target, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int top = target.ssr() == Ssr::Z2 ? 1 : 3;
    std::vector<double> w;
    double total = 0.0;
    for (int k = 0; k <= top; ++k) {
        w.push_back(u(rng) < 0.6 ? u(rng) : 0.0);
        total += w.back();
    }
    if (total == 0.0) {
        w[0] = 1.0;
        total = 1.0;
    }
    WeightMap m;
    for (const auto &[l, q] : target.weights()) {
        for (int k = 0; k <= top; ++k) {
            if (w[static_cast<std::size_t>(k)] > 0.0) {
                m[target.ssr() == Ssr::Z2 ? l ^ k : l + k] += q * w[static_cast<std::size_t>(k)] / total;
            }
        }
    }
    return normalize(m, target.ssr());
}

}  // namespace frameness::testing_support
