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

// Single-copy convertibility between standard-form pure states.
//
// Shift conventions differ by verb and follow the usual presentation of each
// result:
//   * det_feasible reports weights w_k of the convex decomposition
//     p_n = sum_k w_k q_{n-k}, i.e. k = source label - target label.
//   * stoch_feasible and max_prob report the Kraus shift applied to the
//     source, k = target label - source label, except for SU2 where the
//     downward shift J = source label - target label >= 0 is reported.
// All SU2 labels and shifts are in units of 1/2 (twice j).

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "frameness/channels.hpp"
#include "frameness/error.hpp"
#include "frameness/measures.hpp"
#include "frameness/simplex.hpp"
#include "frameness/states.hpp"

namespace frameness {

struct FeasibilityCertificate {
    bool feasible = false;
    std::map<int, double> shift_weights;
    std::optional<KrausChannel> realizing_channel;
    std::string witness;
};

enum class MaxProbMethod { ClosedForm, LpExtension };

inline std::string_view to_string(MaxProbMethod m) { return m == MaxProbMethod::ClosedForm ? "ClosedForm" : "LpExtension"; }

struct MaxProbResult {
    double probability = 0.0;
    MaxProbMethod method = MaxProbMethod::ClosedForm;
    std::map<int, double> per_shift_weights;
};

struct StochasticVerdict {
    bool feasible = false;
    std::vector<int> shifts;
};

namespace detail {

inline void require_pair(const WeightState &source, const WeightState &target) {
    if (source.ssr() != target.ssr()) {
        throw Error(ErrorKind::SsrMismatch, "source and target use different superselection rules");
    }
    if (!is_resource(source)) throw Error(ErrorKind::NotAResource, "source is an invariant state");
    if (!is_resource(target)) throw Error(ErrorKind::NotAResource, "target is an invariant state");
}

inline bool is_plus(const WeightState &s) { return std::abs(s.weight(0) - s.weight(1)) <= tolerance(); }

/// Label carrying the larger Z2 weight (0 on ties).
inline int heavy_label(const WeightState &s) { return s.weight(1) > s.weight(0) ? 1 : 0; }

inline std::string join(const std::vector<int> &xs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    return os.str();
}

inline FeasibilityCertificate det_z2(const WeightState &source, const WeightState &target) {
    FeasibilityCertificate cert;
    const double cs = chirality(source), ct = chirality(target);
    const double p0 = source.weight(0), p1 = source.weight(1);
    const double q0 = target.weight(0), q1 = target.weight(1);
    if (is_plus(target)) {
        if (!is_plus(source)) {
            cert.witness = "only |+> converts deterministically to |+>";
            return cert;
        }
        cert.feasible = true;
        cert.shift_weights = {{0, 1.0}};
        cert.realizing_channel = identity_channel(Ssr::Z2, {0, 1});
        return cert;
    }
    if (cs < ct - tolerance()) {
        std::ostringstream os;
        os.precision(17);
        os << "chirality would increase from " << cs << " to " << ct;
        cert.witness = os.str();
        return cert;
    }
    const double den = q0 * q0 - q1 * q1;
    double w0 = std::clamp((p0 * q0 - p1 * q1) / den, 0.0, 1.0);
    double w1 = std::clamp((p1 * q0 - p0 * q1) / den, 0.0, 1.0);
    const double sum = w0 + w1;
    w0 /= sum;
    w1 /= sum;
    std::vector<DiagonalKraus> ops;
    if (w0 > 0.0) ops.push_back({0, {{0, std::sqrt(w0 * q0 / p0)}, {1, std::sqrt(w0 * q1 / p1)}}});
    if (w1 > 0.0) ops.push_back({1, {{0, std::sqrt(w1 * q1 / p0)}, {1, std::sqrt(w1 * q0 / p1)}}});
    cert.feasible = true;
    if (w0 > 0.0) cert.shift_weights[0] = w0;
    if (w1 > 0.0) cert.shift_weights[1] = w1;
    cert.realizing_channel = build_diagonal_channel(Ssr::Z2, std::move(ops));
    return cert;
}

/// Shifts k with supp(target) + k inside supp(source).
inline std::vector<int> containing_shifts(const WeightState &source, const WeightState &target) {
    std::vector<int> out;
    const int lo = source.min_label() - target.min_label();
    const int hi = source.max_label() - target.max_label();
    for (int k = lo; k <= hi; ++k) {
        bool inside = true;
        for (const auto &kv : target.weights()) {
            if (!source.weights().count(kv.first + k)) {
                inside = false;
                break;
            }
        }
        if (inside) out.push_back(k);
    }
    return out;
}

inline FeasibilityCertificate det_lattice(const WeightState &source, const WeightState &target) {
    FeasibilityCertificate cert;
    std::vector<int> shifts = containing_shifts(source, target);
    if (source.ssr() == Ssr::SU2) std::erase_if(shifts, [](int k) { return k < 0; });
    if (shifts.empty()) {
        cert.witness = source.ssr() == Ssr::SU2 ? "no downward shift J places j-Spec(target) - J inside j-Spec(source)"
                                                : "no shift k places Spec(target) + k inside Spec(source)";
        return cert;
    }
    lp::Problem prob;
    prob.num_vars = shifts.size();
    for (const auto &[n, p] : source.weights()) {
        lp::Constraint row;
        row.coeffs.resize(shifts.size());
        for (std::size_t i = 0; i < shifts.size(); ++i) row.coeffs[i] = target.weight(n - shifts[i]);
        row.relation = lp::Relation::Equal;
        row.rhs = p;
        prob.rows.push_back(std::move(row));
    }
    prob.rows.push_back({std::vector<double>(shifts.size(), 1.0), lp::Relation::Equal, 1.0});
    const auto sol = lp::solve(prob, tolerance());
    if (sol.status != lp::Status::Optimal) {
        std::ostringstream os;
        os << "no convex combination of shifts {" << join(shifts) << "} reproduces the source weights (residual "
           << sol.infeasibility << ")";
        cert.witness = os.str();
        return cert;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        if (sol.x[i] > 1e-12) total += sol.x[i];
    }
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        if (sol.x[i] > 1e-12) cert.shift_weights[shifts[i]] = sol.x[i] / total;
    }
    // c_n = sqrt(w_k q_{n-k} / p_n) behind a downward shift by k.
    std::vector<DiagonalKraus> ops;
    for (const auto &[k, w] : cert.shift_weights) {
        DiagonalKraus op;
        op.shift = -k;
        for (const auto &[n, p] : source.weights()) {
            const double q = target.weight(n - k);
            if (q > 0.0) op.profile[n] = std::sqrt(std::min(1.0, w * q / p));
        }
        ops.push_back(std::move(op));
    }
    cert.feasible = true;
    cert.realizing_channel = build_diagonal_channel(source.ssr(), std::move(ops));
    return cert;
}

}  // namespace detail

/// Deterministic convertibility with a realizing channel when feasible.
inline FeasibilityCertificate det_feasible(const WeightState &source, const WeightState &target) {
    detail::require_pair(source, target);
    if (source.ssr() == Ssr::Z2) return detail::det_z2(source, target);
    return detail::det_lattice(source, target);
}

/// Every shift that maps the target spectrum into the source spectrum.
inline StochasticVerdict stoch_feasible(const WeightState &source, const WeightState &target) {
    detail::require_pair(source, target);
    StochasticVerdict v;
    if (source.ssr() == Ssr::Z2) {
        v.feasible = true;
        v.shifts = {0, 1};
        return v;
    }
    auto shifts = detail::containing_shifts(source, target);
    if (source.ssr() == Ssr::SU2) {
        std::erase_if(shifts, [](int k) { return k < 0; });
        v.shifts = shifts;
    } else {
        for (auto it = shifts.rbegin(); it != shifts.rend(); ++it) v.shifts.push_back(-*it);
    }
    v.feasible = !v.shifts.empty();
    return v;
}

/// Single-outcome Z2 protocol reaching a more chiral target with probability
/// C(source) / C(target); outcome 0 succeeds, outcome 1 prepares a free state.
/// Falls back to the deterministic channel when no increase is needed.
inline KrausChannel z2_max_prob_protocol(const WeightState &source, const WeightState &target) {
    detail::require_pair(source, target);
    require_ssr(source, Ssr::Z2, "z2_max_prob_protocol");
    auto cert = det_feasible(source, target);
    if (cert.feasible) {
        auto ch = *cert.realizing_channel;
        for (auto &op : ch.ops) op.outcome = 0;
        return ch;
    }
    const int bs = detail::heavy_label(source), bt = detail::heavy_label(target);
    const double p_hi = source.weight(bs), p_lo = source.weight(bs ^ 1);
    const double q_hi = target.weight(bt), q_lo = target.weight(bt ^ 1);
    const double x = std::sqrt(std::min(1.0, q_hi * p_lo / (q_lo * p_hi)));
    DiagonalKraus success{bs ^ bt, {{bs, x}, {bs ^ 1, 1.0}}, 0};
    DiagonalKraus failure{0, {{bs, std::sqrt(1.0 - x * x)}}, 1};
    return build_diagonal_channel(Ssr::Z2, {success, failure});
}

/// Maximum probability of a single-copy conversion.
inline MaxProbResult max_prob(const WeightState &source, const WeightState &target) {
    detail::require_pair(source, target);
    MaxProbResult r;
    if (source.ssr() == Ssr::Z2) {
        const double cs = chirality(source), ct = chirality(target);
        auto cert = det_feasible(source, target);
        if (cert.feasible) {
            r.probability = 1.0;
            r.per_shift_weights = cert.shift_weights;
        } else {
            r.probability = std::min(1.0, cs / ct);
            r.per_shift_weights[detail::heavy_label(source) ^ detail::heavy_label(target)] = r.probability;
        }
        return r;
    }
    const auto verdict = stoch_feasible(source, target);
    if (!verdict.feasible) return r;
    // Kraus shift s maps source label n to n + s (SU2: n - J).
    auto image = [&](int n, int shift) { return source.ssr() == Ssr::SU2 ? n - shift : n + shift; };
    if (verdict.shifts.size() == 1) {
        const int k = verdict.shifts.front();
        double best = 1.0;
        for (const auto &[n, p] : source.weights()) {
            const double q = target.weight(image(n, k));
            if (q > 0.0) best = std::min(best, p / q);
        }
        r.probability = best;
        r.per_shift_weights[k] = best;
        return r;
    }
    r.method = MaxProbMethod::LpExtension;
    lp::Problem prob;
    prob.num_vars = verdict.shifts.size();
    prob.objective.assign(verdict.shifts.size(), 1.0);
    for (const auto &[n, p] : source.weights()) {
        lp::Constraint row;
        row.coeffs.resize(verdict.shifts.size());
        for (std::size_t i = 0; i < verdict.shifts.size(); ++i) row.coeffs[i] = target.weight(image(n, verdict.shifts[i]));
        row.relation = lp::Relation::LessEqual;
        row.rhs = p;
        prob.rows.push_back(std::move(row));
    }
    const auto sol = lp::solve(prob, tolerance());
    if (sol.status != lp::Status::Optimal) {
        throw Error(ErrorKind::NotAResource, "maximum-probability program has no optimum");
    }
    for (std::size_t i = 0; i < verdict.shifts.size(); ++i) {
        if (sol.x[i] > 1e-12) r.per_shift_weights[verdict.shifts[i]] = sol.x[i];
    }
    r.probability = std::clamp(sol.objective, 0.0, 1.0);
    return r;
}

/// Channel whose outcome mu leaves the state targets[mu].second with
/// probability targets[mu].first.
inline KrausChannel synthesize_ensemble_z2(const WeightState &source,
                                           const std::vector<std::pair<double, WeightState>> &targets) {
    require_ssr(source, Ssr::Z2, "synthesize_ensemble_z2");
    const double tol = tolerance();
    if (targets.empty()) throw Error(ErrorKind::EmptyState, "empty target ensemble");
    double wsum = 0.0, avg_c = 0.0, t1 = 0.0;
    for (const auto &[w, s] : targets) {
        require_ssr(s, Ssr::Z2, "synthesize_ensemble_z2");
        if (!(w >= 0.0)) throw Error(ErrorKind::NegativeWeight, "ensemble weights must be nonnegative");
        wsum += w;
        avg_c += w * chirality(s);
        t1 += w * std::min(s.weight(0), s.weight(1));
    }
    if (std::abs(wsum - 1.0) > tol) throw Error(ErrorKind::EmptyState, "ensemble weights do not sum to 1");
    if (avg_c > chirality(source) + tol) {
        std::ostringstream os;
        os.precision(17);
        os << "average chirality " << avg_c << " exceeds the source chirality " << chirality(source);
        throw Error(ErrorKind::MonotoneViolated, os.str());
    }
    const double t0 = 1.0 - t1;

    // Deterministic stage source -> (sqrt t0, sqrt t1).
    std::vector<DiagonalKraus> stage;
    if (t1 <= 0.0) {
        stage = {{0, {{0, 1.0}}}, {1, {{1, 1.0}}}};
    } else if (!is_resource(source)) {
        stage = {{source.min_label(), {{source.min_label(), 1.0}}}};
    } else {
        WeightState bar(Ssr::Z2, {{0, t0}, {1, t1}});
        if (detail::is_plus(bar) && !detail::is_plus(source)) {
            bar = WeightState(Ssr::Z2, {{0, 0.5 + 0.5 * std::abs(source.weight(0) - source.weight(1))},
                                        {1, 0.5 - 0.5 * std::abs(source.weight(0) - source.weight(1))}});
        }
        stage = det_feasible(source, bar).realizing_channel->ops;
    }

    std::vector<DiagonalKraus> ops;
    for (std::size_t mu = 0; mu < targets.size(); ++mu) {
        const auto &[w, s] = targets[mu];
        if (w <= 0.0) continue;
        const int flip = detail::heavy_label(s);
        const double hi = s.weight(flip), lo = s.weight(flip ^ 1);
        const double k0 = std::sqrt(std::min(1.0, w * hi / t0));
        const double k1 = t1 > 0.0 ? std::sqrt(std::min(1.0, w * lo / t1)) : 0.0;
        const double k[2] = {k0, k1};
        for (const auto &d : stage) {
            DiagonalKraus op;
            op.shift = d.shift ^ flip;
            op.outcome = static_cast<int>(mu);
            for (const auto &[b, amp] : d.profile) {
                const double kb = k[b ^ d.shift];
                if (kb != 0.0) op.profile[b] = amp * kb;
            }
            if (!op.profile.empty()) ops.push_back(std::move(op));
        }
    }
    return build_diagonal_channel(Ssr::Z2, std::move(ops));
}

/// Spectrum-based stochastic monotones. Labels use the state's own units.
struct StochasticFragment {
    std::size_t cardinality = 0;
    /// F_1, ..., F_{S-1}: largest minus smallest, next-largest minus smallest, ...
    std::vector<int> differences;
    std::set<int> mons;
    std::optional<int> j_max;
    std::optional<std::size_t> chiral_cardinality;
};

inline StochasticFragment stochastic_monotones(const WeightState &s) {
    StochasticFragment f;
    const auto spec = spectrum(s);
    f.cardinality = spec.cardinality();
    const int lowest = spec.labels.front();
    for (auto it = spec.labels.rbegin(); it + 1 != spec.labels.rend(); ++it) {
        f.differences.push_back(*it - lowest);
        f.mons.insert(*it - lowest);
    }
    if (s.ssr() == Ssr::SU2) f.j_max = spec.labels.back();
    if (s.ssr() == Ssr::Z2) f.chiral_cardinality = spec.cardinality();
    return f;
}

/// F_i for any i >= 1, zero beyond the spectrum.
inline int difference_monotone(const StochasticFragment &f, std::size_t i) {
    return i >= 1 && i <= f.differences.size() ? f.differences[i - 1] : 0;
}

/// Every l in 0..max(Mons(psi)) with Mons(phi) + l inside Mons(psi).
inline std::vector<int> mons_inclusion_shifts(const std::set<int> &phi, const std::set<int> &psi) {
    std::vector<int> out;
    if (phi.empty()) return {0};
    const int top = psi.empty() ? 0 : *psi.rbegin();
    for (int l = 0; l <= top; ++l) {
        if (std::all_of(phi.begin(), phi.end(), [&](int m) { return psi.count(m + l) > 0; })) out.push_back(l);
    }
    return out;
}

/// True when p is majorized by q (decreasing partial sums of p never exceed q's).
inline bool is_majorized_by(const WeightState &p, const WeightState &q, double tol = 1e-9) {
    std::vector<double> a, b;
    for (const auto &kv : p.weights()) a.push_back(kv.second);
    for (const auto &kv : q.weights()) b.push_back(kv.second);
    std::sort(a.rbegin(), a.rend());
    std::sort(b.rbegin(), b.rend());
    const std::size_t n = std::max(a.size(), b.size());
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sa += a[i];
        sb += b[i];
        if (sa > sb + tol) return false;
    }
    return true;
}

}  // namespace frameness
