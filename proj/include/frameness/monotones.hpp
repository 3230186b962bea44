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

// Monotone reports and randomized ensemble-monotonicity audits.

#include <cmath>
#include <algorithm>
#include <complex>
#include <limits>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frameness/channels.hpp"
#include "frameness/measures.hpp"
#include "frameness/singlecopy.hpp"
#include "frameness/states.hpp"

namespace frameness {

struct MonotoneReport {
    Ssr ssr = Ssr::U1;
    std::optional<double> chirality;
    std::optional<ExtendedReal> f_infinity;
    std::optional<double> variance;
    std::optional<double> mean;
    StochasticFragment stochastic;
};

inline MonotoneReport monotone_report(const WeightState &s) {
    MonotoneReport r;
    r.ssr = s.ssr();
    switch (s.ssr()) {
        case Ssr::Z2:
            r.chirality = chirality(s);
            r.f_infinity = z2_asymptotic(s);
            break;
        case Ssr::U1:
            r.variance = number_variance(s);
            break;
        case Ssr::SU2:
            r.mean = j_mean(s);
            r.variance = j_variance(s);
            break;
    }
    r.stochastic = stochastic_monotones(s);
    return r;
}

/// Ensemble monotones checked by the audit for each rule.
inline std::vector<std::string> ensemble_monotones(Ssr ssr) {
    switch (ssr) {
        case Ssr::Z2: return {"chirality"};
        case Ssr::U1: return {"variance"};
        case Ssr::SU2: return {"mean", "variance"};
    }
    return {};
}

inline double ensemble_monotone_value(const std::string &name, const WeightState &s) {
    if (name == "chirality") return chirality(s);
    if (name == "mean") return j_mean(s);
    if (s.ssr() == Ssr::U1) return number_variance(s);
    return j_variance(s);
}

struct AuditViolation {
    std::string monotone;
    double before = 0.0;
    double average_after = 0.0;
    std::string instance;
};

/// A Z2 instance where the average of F-infinity grows.
struct FInfinityIncrease {
    WeightState source;
    WeightState target;
    double success_probability = 0.0;
    ExtendedReal before;
    ExtendedReal average_after;
};

struct AuditReport {
    Ssr ssr = Ssr::U1;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> monotones;
    std::vector<AuditViolation> violations;
    /// Largest observed average_after - before over all trials and monotones.
    double max_excess = -std::numeric_limits<double>::infinity();
    /// Z2 only.
    std::vector<FInfinityIncrease> f_infinity_increases;
    int random_f_infinity_increases = 0;
};

namespace detail {

inline std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    return std::mt19937_64(seq);
}

inline WeightState random_state(Ssr ssr, std::mt19937_64 &rng, int max_label = 8, int max_support = 6) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (ssr == Ssr::Z2) {
        const double p0 = 0.02 + 0.96 * unit(rng);
        return WeightState(Ssr::Z2, {{0, p0}, {1, 1.0 - p0}});
    }
    std::uniform_int_distribution<int> size_dist(1, max_support);
    std::uniform_int_distribution<int> label_dist(0, max_label);
    const int size = size_dist(rng);
    WeightMap raw;
    while (static_cast<int>(raw.size()) < size) raw[label_dist(rng)] = 0.05 + unit(rng);
    return normalize(raw, ssr);
}

/// Random trace-preserving invariant channel acting on the given labels.
inline KrausChannel random_invariant_channel(Ssr ssr, const std::vector<int> &labels, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> count_dist(1, 4);
    std::vector<int> shifts{0};
    const int extra = count_dist(rng) - 1;
    for (int i = 0; i < extra; ++i) {
        switch (ssr) {
            case Ssr::Z2: shifts.push_back(static_cast<int>(rng() & 1)); break;
            case Ssr::U1: shifts.push_back(std::uniform_int_distribution<int>(-3, 3)(rng)); break;
            case Ssr::SU2: shifts.push_back(-std::uniform_int_distribution<int>(0, 4)(rng)); break;
        }
    }
    std::vector<DiagonalKraus> ops(shifts.size());
    for (std::size_t i = 0; i < shifts.size(); ++i) ops[i].shift = shifts[i];
    for (int label : labels) {
        std::vector<std::size_t> legal;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (shifted_label(ssr, label, ops[i].shift)) legal.push_back(i);
        }
        std::vector<double> mags;
        double total = 0.0;
        for (std::size_t i = 0; i < legal.size(); ++i) {
            // Occasionally zero an amplitude so supports change.
            double m = unit(rng) < 0.15 ? 0.0 : unit(rng);
            mags.push_back(m);
            total += m;
        }
        if (total == 0.0) {
            mags[0] = 1.0;
            total = 1.0;
        }
        for (std::size_t i = 0; i < legal.size(); ++i) {
            if (mags[i] == 0.0) continue;
            const double phase = 2.0 * std::numbers::pi * unit(rng);
            ops[legal[i]].profile[label] = std::polar(std::sqrt(mags[i] / total), phase);
        }
    }
    std::erase_if(ops, [](const DiagonalKraus &op) { return op.profile.empty(); });
    return build_diagonal_channel(ssr, std::move(ops));
}

inline std::string describe(const WeightState &s) {
    std::ostringstream os;
    os.precision(17);
    os << "{";
    bool first = true;
    for (const auto &[l, w] : s.weights()) {
        os << (first ? "" : ",") << "\"" << l << "\":" << w;
        first = false;
    }
    os << "}";
    return os.str();
}

inline std::string describe(const KrausChannel &ch) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (std::size_t i = 0; i < ch.ops.size(); ++i) {
        os << (i ? "," : "") << "{\"shift\":" << ch.ops[i].shift << ",\"profile\":{";
        bool first = true;
        for (const auto &[l, c] : ch.ops[i].profile) {
            os << (first ? "" : ",") << "\"" << l << "\":[" << c.real() << "," << c.imag() << "]";
            first = false;
        }
        os << "}}";
    }
    os << "]";
    return os.str();
}

inline FInfinityIncrease f_infinity_increase(const WeightState &source, const WeightState &target) {
    FInfinityIncrease out{source, target, 0.0, z2_asymptotic(source), {}};
    auto ch = z2_max_prob_protocol(source, target);
    double avg = 0.0;
    for (const auto &b : apply(ch, source)) {
        const auto f = z2_asymptotic(b.state);
        if (b.outcome == 0) out.success_probability = b.probability;
        if (f.is_infinite()) {
            avg = std::numeric_limits<double>::infinity();
        } else {
            avg += b.probability * f.value;
        }
    }
    out.average_after = {avg};
    return out;
}

}  // namespace detail

/// Z2 instances where measuring toward a more chiral target raises the
/// average of F-infinity: toward |+> (unbounded) and toward p0 = 0.55.
inline std::vector<FInfinityIncrease> f_infinity_counterexamples() {
    const WeightState source(Ssr::Z2, {{0, 0.7}, {1, 0.3}});
    return {detail::f_infinity_increase(source, WeightState(Ssr::Z2, {{0, 0.5}, {1, 0.5}})),
            detail::f_infinity_increase(source, WeightState(Ssr::Z2, {{0, 0.55}, {1, 0.45}}))};
}

/// Applies `trials` random trace-preserving invariant channels to random
/// states and checks that each ensemble monotone does not grow on average.
/// Throws AuditFailed on the first violation, carrying the instance.
inline AuditReport monotonicity_audit(Ssr ssr, int trials, std::uint64_t seed) {
    if (trials < 1) throw Error(ErrorKind::ParseError, "trials must be at least 1");
    AuditReport report;
    report.ssr = ssr;
    report.trials = trials;
    report.seed = seed;
    report.monotones = ensemble_monotones(ssr);
    for (int t = 0; t < trials; ++t) {
        auto rng = detail::trial_rng(seed, t);
        const auto state = detail::random_state(ssr, rng);
        const auto channel = detail::random_invariant_channel(ssr, spectrum(state).labels, rng);
        const auto branches = apply(channel, state);
        for (const auto &name : report.monotones) {
            const double before = ensemble_monotone_value(name, state);
            double after = 0.0;
            for (const auto &b : branches) after += b.probability * ensemble_monotone_value(name, b.state);
            report.max_excess = std::max(report.max_excess, after - before);
            if (after > before + 1e-9) {
                AuditViolation v{name, before, after,
                                 "{\"trial\":" + std::to_string(t) + ",\"state\":" + detail::describe(state) +
                                     ",\"ops\":" + detail::describe(channel) + "}"};
                report.violations.push_back(v);
                std::ostringstream os;
                os.precision(17);
                os << name << " grows on average from " << before << " to " << after << ": " << v.instance;
                throw Error(ErrorKind::AuditFailed, os.str());
            }
        }
        if (ssr == Ssr::Z2) {
            const double before = z2_asymptotic(state).value;
            double after = 0.0;
            for (const auto &b : branches) after += b.probability * z2_asymptotic(b.state).value;
            if (after > before + 1e-9) ++report.random_f_infinity_increases;
        }
    }
    if (ssr == Ssr::Z2) {
        report.f_infinity_increases = f_infinity_counterexamples();
        for (const auto &c : report.f_infinity_increases) {
            if (!(c.average_after.value > c.before.value)) {
                throw Error(ErrorKind::AuditFailed, "F-infinity counterexample did not increase the average");
            }
        }
    }
    return report;
}

}  // namespace frameness
