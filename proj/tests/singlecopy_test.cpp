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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "frameness/monotones.hpp"
#include "frameness/singlecopy.hpp"
#include "support.hpp"

namespace frameness {
namespace {

WeightState U1(WeightMap m) { return normalize(m, Ssr::U1); }
WeightState Z2(double p0) { return WeightState(Ssr::Z2, {{0, p0}, {1, 1.0 - p0}}); }

WeightState uniform(Ssr ssr, std::vector<int> labels) {
    WeightMap m;
    for (int l : labels) m[l] = 1.0;
    return normalize(m, ssr);
}

ErrorKind kind_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    return ErrorKind::ParseError;
}

// Every branch of the certificate's channel must leave the target.
void expect_certificate_realizes(const FeasibilityCertificate &c, const WeightState &source, const WeightState &target) {
    ASSERT_TRUE(c.feasible);
    ASSERT_TRUE(c.realizing_channel.has_value());
    double total = 0.0;
    for (const auto &b : apply(*c.realizing_channel, source)) {
        total += b.probability;
        for (const auto &[l, q] : target.weights()) EXPECT_NEAR(b.state.weight(l), q, 1e-8);
        EXPECT_EQ(b.state.size(), target.size());
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Deterministic, NumberExamples) {
    auto a = uniform(Ssr::U1, {1, 2}), b = uniform(Ssr::U1, {0, 1});
    auto c = det_feasible(a, b);
    EXPECT_EQ(c.shift_weights, (std::map<int, double>{{1, 1.0}}));
    expect_certificate_realizes(c, a, b);

    auto four = uniform(Ssr::U1, {0, 1, 2, 3});
    c = det_feasible(four, b);
    ASSERT_EQ(c.shift_weights.size(), 2u);
    EXPECT_NEAR(c.shift_weights.at(0), 0.5, 1e-12);
    EXPECT_NEAR(c.shift_weights.at(2), 0.5, 1e-12);
    expect_certificate_realizes(c, four, b);

    auto r = det_feasible(b, four);
    EXPECT_FALSE(r.feasible);
    EXPECT_FALSE(r.witness.empty());
    EXPECT_FALSE(is_majorized_by(b, four));
}

TEST(Deterministic, AngularMomentumDownwardShift) {
    auto a = uniform(Ssr::SU2, {2, 4}), b = uniform(Ssr::SU2, {0, 2});
    auto c = det_feasible(a, b);
    EXPECT_EQ(c.shift_weights, (std::map<int, double>{{2, 1.0}}));
    expect_certificate_realizes(c, a, b);
    // Upward is never available.
    EXPECT_FALSE(det_feasible(b, a).feasible);
}

TEST(Deterministic, ParityExamples) {
    auto c = det_feasible(Z2(0.7), Z2(0.8));
    expect_certificate_realizes(c, Z2(0.7), Z2(0.8));
    c = det_feasible(Z2(0.7), Z2(0.2));
    expect_certificate_realizes(c, Z2(0.7), Z2(0.2));
    EXPECT_FALSE(det_feasible(Z2(0.8), Z2(0.7)).feasible);
    EXPECT_TRUE(det_feasible(Z2(0.5), Z2(0.9)).feasible);
    EXPECT_FALSE(det_feasible(Z2(0.6), Z2(0.5)).feasible);
    expect_certificate_realizes(det_feasible(Z2(0.5), Z2(0.5)), Z2(0.5), Z2(0.5));
}

TEST(Deterministic, Errors) {
    EXPECT_EQ(kind_of([] { det_feasible(Z2(0.7), uniform(Ssr::U1, {0, 1})); }), ErrorKind::SsrMismatch);
    EXPECT_EQ(kind_of([] { det_feasible(uniform(Ssr::U1, {3}), uniform(Ssr::U1, {0, 1})); }), ErrorKind::NotAResource);
    EXPECT_EQ(kind_of([] { det_feasible(uniform(Ssr::U1, {0, 1}), uniform(Ssr::U1, {3})); }), ErrorKind::NotAResource);
}

TEST(Stochastic, SpectrumInclusion) {
    auto psi = uniform(Ssr::U1, {1, 3, 4, 6, 10, 11, 12}), phi = uniform(Ssr::U1, {7, 13, 14});
    auto v = stoch_feasible(psi, phi);
    EXPECT_TRUE(v.feasible);
    EXPECT_NE(std::find(v.shifts.begin(), v.shifts.end(), 3), v.shifts.end());

    auto ab = uniform(Ssr::U1, {0, 1}), ac = uniform(Ssr::U1, {0, 2});
    EXPECT_FALSE(stoch_feasible(ab, ac).feasible);
    EXPECT_FALSE(stoch_feasible(ac, ab).feasible);

    auto two_three = uniform(Ssr::SU2, {4, 6}), low = uniform(Ssr::SU2, {0, 2, 4});
    EXPECT_FALSE(stoch_feasible(two_three, low).feasible);
    EXPECT_FALSE(stoch_feasible(low, two_three).feasible);

    auto z = stoch_feasible(Z2(0.9), Z2(0.5));
    EXPECT_TRUE(z.feasible);
    EXPECT_EQ(z.shifts, (std::vector<int>{0, 1}));
}

TEST(MaxProb, ParityClosedFormAndProtocol) {
    auto r = max_prob(Z2(0.7), Z2(0.6));
    EXPECT_NEAR(r.probability, 0.75, 1e-15);
    auto ch = z2_max_prob_protocol(Z2(0.7), Z2(0.6));
    EXPECT_TRUE(ch.trace_preserving);
    bool seen = false;
    for (const auto &b : apply(ch, Z2(0.7))) {
        if (b.outcome != 0) continue;
        seen = true;
        EXPECT_NEAR(b.probability, 0.75, 1e-12);
        EXPECT_NEAR(b.state.weight(1), 0.4, 1e-12);
    }
    EXPECT_TRUE(seen);
}

TEST(MaxProb, SingleShiftClosedForm) {
    auto r = max_prob(U1({{0, 0.7}, {1, 0.3}}), U1({{0, 0.5}, {1, 0.5}}));
    EXPECT_EQ(r.method, MaxProbMethod::ClosedForm);
    EXPECT_NEAR(r.probability, 0.6, 1e-15);
}

TEST(MaxProb, MultiShiftProgram) {
    auto r = max_prob(uniform(Ssr::U1, {0, 1, 2, 3}), uniform(Ssr::U1, {0, 1}));
    EXPECT_EQ(r.method, MaxProbMethod::LpExtension);
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
    EXPECT_NEAR(r.per_shift_weights.at(0), 0.5, 1e-12);
    EXPECT_NEAR(r.per_shift_weights.at(-2), 0.5, 1e-12);
    EXPECT_EQ(max_prob(uniform(Ssr::U1, {0, 1}), uniform(Ssr::U1, {0, 2})).probability, 0.0);
}

// Single-Kraus brute force: an operator with shift k reaches the target with
// amplitude lambda sqrt(q_{n+k}) on every n, which needs lambda <= sqrt(p_n / q_{n+k}).
double grid_single_shift(const WeightState &source, const WeightState &target, int k) {
    double best = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double lambda = i * 1e-3;
        bool ok = true;
        for (const auto &[n, p] : source.weights()) {
            const int image = source.ssr() == Ssr::SU2 ? n - k : n + k;
            const double q = target.weight(image);
            if (q > 0.0 && lambda * std::sqrt(q / p) > 1.0) ok = false;
        }
        if (ok) best = lambda * lambda;
    }
    return best;
}

TEST(MaxProb, ProgramDominatesEverySingleShift) {
    std::mt19937_64 rng(41);
    int multi = 0;
    for (int t = 0; t < 300; ++t) {
        auto a = detail::random_state(Ssr::U1, rng, 7, 6);
        auto b = detail::random_state(Ssr::U1, rng, 3, 3);
        if (!is_resource(a) || !is_resource(b)) continue;
        auto v = stoch_feasible(a, b);
        auto r = max_prob(a, b);
        if (!v.feasible) {
            EXPECT_EQ(r.probability, 0.0);
            continue;
        }
        for (int k : v.shifts) {
            double single = 1.0;
            for (const auto &[n, p] : a.weights()) {
                const double q = b.weight(n + k);
                if (q > 0.0) single = std::min(single, p / q);
            }
            EXPECT_GE(r.probability, single - 1e-12);
            EXPECT_NEAR(grid_single_shift(a, b, k), single, 2e-3);
            if (v.shifts.size() == 1) {
                EXPECT_NEAR(r.probability, single, 1e-12);
            }
        }
        multi += v.shifts.size() > 1;
    }
    EXPECT_GT(multi, 10);
}

TEST(Consistency, DeterministicImpliesCertainImpliesStochastic) {
    for (Ssr ssr : {Ssr::Z2, Ssr::U1, Ssr::SU2}) {
        int feasible = 0;
        for (int t = 0; t < 500; ++t) {
            auto rng = detail::trial_rng(17, t);
            auto a = detail::random_state(ssr, rng, 9, 8);
            auto b = detail::random_state(ssr, rng, 5, 4);
            if (t % 3 == 0) a = testing_support::smeared_source(b, rng);
            if (!is_resource(a) || !is_resource(b)) continue;
            auto c = det_feasible(a, b);
            if (!c.feasible) continue;
            ++feasible;
            expect_certificate_realizes(c, a, b);
            EXPECT_NEAR(max_prob(a, b).probability, 1.0, 1e-9);
            EXPECT_TRUE(stoch_feasible(a, b).feasible);
            if (ssr == Ssr::U1) {
                EXPECT_TRUE(is_majorized_by(a, b));
            }
        }
        EXPECT_GT(feasible, 5) << to_string(ssr);
    }
}

TEST(Consistency, ParityStatesInterconvertStochastically) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        auto a = detail::random_state(Ssr::Z2, rng), b = detail::random_state(Ssr::Z2, rng);
        EXPECT_GT(max_prob(a, b).probability, 0.0);
        EXPECT_GT(max_prob(b, a).probability, 0.0);
    }
}

TEST(Consistency, StochasticMonotonesNeverGrow) {
    for (Ssr ssr : {Ssr::U1, Ssr::SU2}) {
        int feasible = 0;
        for (int t = 0; t < 2000; ++t) {
            auto rng = detail::trial_rng(23, t);
            auto a = detail::random_state(ssr, rng, 10, 7);
            auto b = detail::random_state(ssr, rng, 6, 3);
            if (!is_resource(a) || !is_resource(b) || !stoch_feasible(a, b).feasible) continue;
            ++feasible;
            auto fa = stochastic_monotones(a), fb = stochastic_monotones(b);
            EXPECT_LE(fb.cardinality, fa.cardinality);
            for (std::size_t i = 1; i <= fa.cardinality + 1; ++i) {
                EXPECT_LE(difference_monotone(fb, i), difference_monotone(fa, i));
            }
            EXPECT_FALSE(mons_inclusion_shifts(fb.mons, fa.mons).empty());
            if (ssr == Ssr::SU2) {
                EXPECT_LE(*fb.j_max, *fa.j_max);
            }
        }
        EXPECT_GT(feasible, 20) << to_string(ssr);
    }
}

TEST(Ensemble, TrivialEnsembleIsIdentity) {
    auto ch = synthesize_ensemble_z2(Z2(0.7), {{1.0, Z2(0.7)}});
    auto out = apply(ch, Z2(0.7));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out[0].probability, 1.0, 1e-12);
    EXPECT_NEAR(out[0].state.weight(0), 0.7, 1e-12);
}

TEST(Ensemble, PlusReachesAnyEnsemble) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        auto a = detail::random_state(Ssr::Z2, rng), b = detail::random_state(Ssr::Z2, rng);
        auto ch = synthesize_ensemble_z2(Z2(0.5), {{0.5, a}, {0.5, b}});
        auto out = apply(ch, Z2(0.5));
        ASSERT_EQ(out.size(), 2u);
        for (const auto &br : out) {
            EXPECT_NEAR(br.probability, 0.5, 1e-8);
            EXPECT_NEAR(br.state.weight(0), (br.outcome == 0 ? a : b).weight(0), 1e-8);
        }
    }
}

TEST(Ensemble, ChiralityBudget) {
    EXPECT_EQ(kind_of([] { synthesize_ensemble_z2(Z2(0.9), {{1.0, Z2(0.75)}}); }), ErrorKind::MonotoneViolated);
    // Exactly at the budget, several targets, some flipped.
    auto ch = synthesize_ensemble_z2(Z2(0.8), {{0.25, Z2(0.5)}, {0.5, Z2(0.9)}, {0.25, Z2(1.0)}});
    std::map<int, double> expect{{0, 0.5}, {1, 0.9}, {2, 1.0}};
    for (const auto &br : apply(ch, Z2(0.8))) EXPECT_NEAR(br.state.weight(0), expect[br.outcome], 1e-8);
    auto flipped = synthesize_ensemble_z2(Z2(0.3), {{0.6, Z2(0.2)}, {0.4, Z2(0.95)}});
    double total = 0.0;
    for (const auto &br : apply(flipped, Z2(0.3))) {
        total += br.probability;
        EXPECT_NEAR(br.probability, br.outcome == 0 ? 0.6 : 0.4, 1e-8);
        EXPECT_NEAR(br.state.weight(0), br.outcome == 0 ? 0.2 : 0.95, 1e-8);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(StochasticMonotones, Examples) {
    auto f = stochastic_monotones(uniform(Ssr::U1, {1, 3, 4, 6, 10, 11, 12}));
    EXPECT_EQ(f.mons, (std::set<int>{11, 10, 9, 5, 3, 2}));
    EXPECT_EQ(f.differences, (std::vector<int>{11, 10, 9, 5, 3, 2}));
    auto g = stochastic_monotones(uniform(Ssr::U1, {7, 13, 14}));
    EXPECT_EQ(g.mons, (std::set<int>{7, 6}));
    auto ls = mons_inclusion_shifts(g.mons, f.mons);
    EXPECT_NE(std::find(ls.begin(), ls.end(), 3), ls.end());
    auto single = stochastic_monotones(normalize({{4, 1.0}}, Ssr::SU2));
    EXPECT_EQ(single.cardinality, 1u);
    for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(difference_monotone(single, i), 0);
    EXPECT_EQ(*single.j_max, 4);
    EXPECT_EQ(*stochastic_monotones(Z2(0.3)).chiral_cardinality, 2u);
}

}  // namespace
}  // namespace frameness
