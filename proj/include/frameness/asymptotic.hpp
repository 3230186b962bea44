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

// Many-copy behaviour: exact tensor powers, fidelities, asymptotic rates and
// finite-N evidence for them, and the SU2 variance-reduction measurement.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frameness/channels.hpp"
#include "frameness/error.hpp"
#include "frameness/measures.hpp"
#include "frameness/singlecopy.hpp"
#include "frameness/states.hpp"

namespace frameness {

inline constexpr int kDefaultWindow = 20000;

namespace detail {

/// Dense weights on labels offset, offset + 1, ...
struct Dense {
    int offset = 0;
    std::vector<double> w;
};

inline Dense to_dense(const WeightState &s) {
    Dense d;
    d.offset = s.min_label();
    d.w.assign(static_cast<std::size_t>(s.max_label() - s.min_label() + 1), 0.0);
    for (const auto &[l, p] : s.weights()) d.w[static_cast<std::size_t>(l - d.offset)] = p;
    return d;
}

inline Dense convolve(const Dense &a, const Dense &b) {
    Dense out;
    out.offset = a.offset + b.offset;
    out.w.assign(a.w.size() + b.w.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.w.size(); ++i) {
        const double x = a.w[i];
        if (x == 0.0) continue;
        double *dst = out.w.data() + i;
        for (std::size_t k = 0; k < b.w.size(); ++k) dst[k] += x * b.w[k];
    }
    return out;
}

inline Dense dense_power(const Dense &base, int n) {
    Dense result{0, {1.0}};
    Dense square = base;
    bool first = true;
    while (n > 0) {
        if (n & 1) {
            result = first ? square : convolve(result, square);
            first = false;
        }
        n >>= 1;
        if (n > 0) square = convolve(square, square);
    }
    return result;
}

inline WeightState from_dense(Ssr ssr, const Dense &d, const std::string &axis) {
    WeightMap m;
    for (std::size_t i = 0; i < d.w.size(); ++i) {
        if (d.w[i] != 0.0) {
            const int label = d.offset + static_cast<int>(i);
            m[ssr == Ssr::Z2 ? label % 2 : label] += d.w[i];
        }
    }
    return WeightState(ssr, std::move(m), axis);
}

/// sum_n sqrt(a_n b_{n + shift}).
inline double overlap(const Dense &a, const Dense &b, int shift) {
    double f = 0.0;
    for (std::size_t i = 0; i < a.w.size(); ++i) {
        const long j = static_cast<long>(a.offset) + static_cast<long>(i) + shift - b.offset;
        if (j < 0 || j >= static_cast<long>(b.w.size())) continue;
        f += std::sqrt(a.w[i] * b.w[static_cast<std::size_t>(j)]);
    }
    return std::min(f, 1.0);
}

inline double dense_mean(const Dense &d) {
    double m = 0.0;
    for (std::size_t i = 0; i < d.w.size(); ++i) m += d.w[i] * (d.offset + static_cast<double>(i));
    return m;
}

}  // namespace detail

/// Exact N-fold tensor power by repeated squaring of the weight convolution.
inline WeightState tensor_power(const WeightState &s, int n, int window = kDefaultWindow) {
    if (n < 1) throw Error(ErrorKind::ParseError, "tensor power needs N >= 1");
    if (s.ssr() == Ssr::Z2) {
        // Parities add mod 2; iterate the two-point convolution on the parity pair.
        const double p0 = s.weight(0), p1 = s.weight(1);
        double r0 = 1.0, r1 = 0.0, b0 = p0, b1 = p1;
        for (int e = n; e > 0; e >>= 1) {
            if (e & 1) {
                const double n0 = r0 * b0 + r1 * b1, n1 = r0 * b1 + r1 * b0;
                r0 = n0;
                r1 = n1;
            }
            const double s0 = b0 * b0 + b1 * b1, s1 = 2.0 * b0 * b1;
            b0 = s0;
            b1 = s1;
        }
        WeightMap m;
        if (r0 != 0.0) m[0] = r0;
        if (r1 != 0.0) m[1] = r1;
        return WeightState(Ssr::Z2, std::move(m));
    }
    if (static_cast<long>(s.max_label()) * n > window) {
        throw Error(ErrorKind::WindowExceeded, "tensor power reaches label " + std::to_string(static_cast<long>(s.max_label()) * n) +
                                                   " beyond the window " + std::to_string(window));
    }
    return detail::from_dense(s.ssr(), detail::dense_power(detail::to_dense(s), n), s.axis());
}

/// Standard-form weights of the N-th Z2 power: r0 = 1/2 + 1/2 (p0 - p1)^N.
inline std::pair<double, double> z2_power_closed_form(const WeightState &s, int n) {
    require_ssr(s, Ssr::Z2, "z2_power_closed_form");
    const double r0 = 0.5 + 0.5 * std::pow(s.weight(0) - s.weight(1), n);
    return {r0, 1.0 - r0};
}

/// Bhattacharyya overlap sum_l sqrt(a_l b_l).
inline double fidelity(const WeightState &a, const WeightState &b) {
    if (a.ssr() != b.ssr()) throw Error(ErrorKind::SsrMismatch, "fidelity between different superselection rules");
    double f = 0.0;
    for (const auto &[l, p] : a.weights()) {
        const double q = b.weight(l);
        if (q > 0.0) f += std::sqrt(p * q);
    }
    return std::min(f, 1.0);
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

inline Moments moments(const WeightState &s) {
    Moments m;
    for (const auto &[l, p] : s.weights()) m.mean += p * label_value(s.ssr(), l);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const auto &[l, p] : s.weights()) {
        const double d = label_value(s.ssr(), l) - m.mean;
        m2 += p * d * d;
        m3 += p * d * d * d;
        m4 += p * d * d * d * d;
    }
    m.variance = m2;
    if (m2 > 0.0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

enum class Regime { Z2Exact, U1GaplessVariance, Su2MinMeanVariance, Zero, Unsupported };

inline std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Z2Exact: return "Z2Exact";
        case Regime::U1GaplessVariance: return "U1GaplessVariance";
        case Regime::Su2MinMeanVariance: return "Su2MinMeanVariance";
        case Regime::Zero: return "Zero";
        case Regime::Unsupported: return "Unsupported";
    }
    return "?";
}

struct RateEvidence {
    int n = 0;
    int m = 0;
    double fidelity = 0.0;
    /// Kraus shift applied to the source power (SU2: downward 2J).
    int shift_used = 0;
    bool variance_reduced = false;
};

struct RateResult {
    /// NaN when regime is Unsupported.
    ExtendedReal rate;
    bool reversible = false;
    Regime regime = Regime::Unsupported;
    std::optional<RateEvidence> evidence;
    std::string note;
};

namespace detail {

/// True when every gap between consecutive labels equals the same step.
inline bool uniform_spacing(const WeightState &s) {
    const int g = support_gcd(s);
    int prev = s.min_label();
    for (const auto &kv : s.weights()) {
        if (kv.first != prev && kv.first - prev != g) return false;
        prev = kv.first;
    }
    return true;
}

inline double safe_ratio(double a, double b) {
    if (b == 0.0) return a == 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
    return a / b;
}

}  // namespace detail

/// Optimal asymptotic conversion rate (target copies per source copy).
inline RateResult rate(const WeightState &source, const WeightState &target) {
    detail::require_pair(source, target);
    RateResult r;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (source.ssr() == Ssr::Z2) {
        const auto fs = z2_asymptotic(source), ft = z2_asymptotic(target);
        if (ft.is_infinite()) {
            r.rate = {0.0};
            r.regime = Regime::Zero;
            r.note = "target is |+>";
        } else if (fs.is_infinite()) {
            r.rate = ExtendedReal::infinity();
            r.regime = Regime::Z2Exact;
            r.note = "source is |+>";
        } else {
            r.rate = {fs.value / ft.value};
            r.regime = Regime::Z2Exact;
            r.reversible = true;
        }
        return r;
    }

    const int gs = support_gcd(source), gt = support_gcd(target);
    const bool lattice = gs > 0 && gs == gt && detail::uniform_spacing(source) && detail::uniform_spacing(target);
    if (source.ssr() == Ssr::U1) {
        if (is_gapless(source) && is_gapless(target)) {
            r.regime = Regime::U1GaplessVariance;
        } else if (gt % gs != 0) {
            r.rate = {0.0};
            r.regime = Regime::Zero;
            r.note = "target spacing " + std::to_string(gt) + " is not a multiple of the source spacing " + std::to_string(gs);
            return r;
        } else if (lattice) {
            r.regime = Regime::U1GaplessVariance;
            r.note = "both spectra relabeled n -> n/" + std::to_string(gs);
        } else {
            r.rate = {nan};
            r.note = "gapped spectra";
            return r;
        }
        r.rate = {number_variance(source) / number_variance(target)};
        r.reversible = true;
        return r;
    }

    // SU2, labels 2j.
    const double ms = j_mean(source), mt = j_mean(target);
    const double vs = j_variance(source), vt = j_variance(target);
    if (gs == 0 && gt == 0) {
        r.regime = Regime::Su2MinMeanVariance;
        r.rate = {ms / mt};
        r.reversible = true;
        r.note = "both are single |j, j> states";
        return r;
    }
    if (gs == 0) {
        r.rate = {0.0};
        r.regime = Regime::Zero;
        r.note = "a single |j, j> source has no j-variance";
        return r;
    }
    if (gt == 0 || (is_gapless(source) && is_gapless(target)) || lattice) {
        r.regime = Regime::Su2MinMeanVariance;
        const double mean_ratio = ms / mt;
        const double var_ratio = detail::safe_ratio(vs, vt);
        r.rate = {std::min(mean_ratio, var_ratio)};
        r.reversible = gt != 0 && std::abs(ms / vs - mt / vt) <= 1e-9;
        if (gt != 0 && !is_gapless(source)) r.note = "both spectra relabeled 2j -> 2j/" + std::to_string(gs);
        if (r.rate.value == 0.0) r.regime = Regime::Zero;
        return r;
    }
    if (gt % gs != 0) {
        r.rate = {0.0};
        r.regime = Regime::Zero;
        r.note = "target spacing is not a multiple of the source spacing";
        return r;
    }
    r.rate = {nan};
    r.note = "gapped spectra";
    return r;
}

// ---------------------------------------------------------------------------
// Variance reduction.

struct VarianceReduction {
    std::vector<std::pair<double, WeightState>> ensemble;
    double achieved = 0.0;
    double t = 0.0;
    KrausChannel channel;
};

namespace detail {

class FourierPath {
   public:
    explicit FourierPath(int d) : d_(d) {
        Matrix f(d, d);
        const double norm = 1.0 / std::sqrt(static_cast<double>(d));
        for (int j = 0; j < d; ++j) {
            for (int mu = 0; mu < d; ++mu) {
                f(j, mu) = std::polar(norm, 2.0 * std::numbers::pi * j * mu / d);
            }
        }
        f_ = f;
        Eigen::ComplexSchur<Matrix> schur(f);
        q_ = schur.matrixU();
        theta_.resize(d);
        for (int k = 0; k < d; ++k) {
            double th = std::arg(schur.matrixT()(k, k));
            if (th <= -std::numbers::pi + 1e-12) th = std::numbers::pi;
            theta_[static_cast<std::size_t>(k)] = th;
        }
    }

    /// u(t) = exp(t log F), principal branch. The endpoints are exact.
    Matrix at(double t) const {
        if (t == 0.0) return Matrix::Identity(d_, d_);
        if (t == 1.0) return f_;
        Eigen::VectorXcd ph(d_);
        for (int k = 0; k < d_; ++k) ph(k) = std::exp(Complex(0.0, t * theta_[static_cast<std::size_t>(k)]));
        return q_ * ph.asDiagonal() * q_.adjoint();
    }

   private:
    int d_;
    Matrix f_;
    Matrix q_;
    std::vector<double> theta_;
};

/// Ensemble-average 4 Var(J) after the measurement u on weights p at values x.
inline double average_variance(const Matrix &u, const std::vector<double> &p, const std::vector<double> &x) {
    double total = 0.0;
    const auto d = static_cast<Eigen::Index>(p.size());
    for (Eigen::Index mu = 0; mu < d; ++mu) {
        double w = 0.0, m1 = 0.0, m2 = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double a = std::norm(u(j, mu)) * p[static_cast<std::size_t>(j)];
            w += a;
            m1 += a * x[static_cast<std::size_t>(j)];
            m2 += a * x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        }
        if (w <= 0.0) continue;
        total += 4.0 * std::max(0.0, m2 - m1 * m1 / w);
    }
    return total;
}

}  // namespace detail

/// Measurement along the unitary path from the identity to the Fourier
/// matrix, tuned so the average j-variance of the outcomes equals `target`.
inline VarianceReduction variance_reduction_measurement(const WeightState &s, double target) {
    require_ssr(s, Ssr::SU2, "variance_reduction_measurement");
    const double v = j_variance(s);
    if (!(target >= -1e-9) || target > v + 1e-9) {
        throw Error(ErrorKind::TargetOutOfRange,
                    "target average variance " + std::to_string(target) + " outside [0, " + std::to_string(v) + "]");
    }
    target = std::clamp(target, 0.0, v);
    const auto spec = spectrum(s);
    const int d = static_cast<int>(spec.cardinality());
    std::vector<double> p, x;
    for (int l : spec.labels) {
        p.push_back(s.weight(l));
        x.push_back(0.5 * l);
    }
    detail::FourierPath path(d);
    auto excess = [&](double t) { return detail::average_variance(path.at(t), p, x) - target; };

    double t = 0.0;
    if (d == 1 || target <= 0.0) {
        t = 0.0;
    } else if (target >= v) {
        t = 1.0;
    } else {
        constexpr int kScan = 64;
        double lo = 0.0, hi = 1.0;
        double flo = excess(0.0);
        bool bracketed = false;
        for (int i = 1; i < kScan; ++i) {
            const double ti = static_cast<double>(i) / (kScan - 1);
            const double fi = excess(ti);
            if ((flo <= 0.0) != (fi <= 0.0)) {
                hi = ti;
                bracketed = true;
                break;
            }
            lo = ti;
            flo = fi;
        }
        if (!bracketed) throw Error(ErrorKind::TargetOutOfRange, "no sign change of the average variance along the path");
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            if ((excess(mid) <= 0.0) == (flo <= 0.0)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        t = 0.5 * (lo + hi);
    }

    const Matrix u = path.at(t);
    std::vector<DiagonalKraus> ops;
    for (int mu = 0; mu < d; ++mu) {
        DiagonalKraus op;
        op.outcome = mu;
        for (int j = 0; j < d; ++j) op.profile[spec.labels[static_cast<std::size_t>(j)]] = u(j, mu);
        ops.push_back(std::move(op));
    }
    VarianceReduction out;
    out.t = t;
    out.channel = build_diagonal_channel(Ssr::SU2, std::move(ops));
    for (auto &b : apply(out.channel, s)) {
        out.achieved += b.probability * j_variance(b.state);
        out.ensemble.emplace_back(b.probability, std::move(b.state));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-N evidence.

namespace detail {

struct ShiftChoice {
    int shift = 0;
    double fidelity = 0.0;
};

/// Best Kraus shift near the mean-aligning one. `downward_only` restricts to
/// shifts that lower labels (SU2).
inline ShiftChoice best_shift(const Dense &p, const Dense &q, bool downward_only) {
    const double estimate = dense_mean(q) - dense_mean(p);
    if (downward_only && estimate > 1.0) {
        throw Error(ErrorKind::ShiftDirectionUnavailable,
                    "aligning the means needs an upward j shift of " + std::to_string(estimate / 2.0));
    }
    ShiftChoice best{0, -1.0};
    const int lo = static_cast<int>(std::floor(estimate)) - 4, hi = static_cast<int>(std::ceil(estimate)) + 4;
    for (int k = lo; k <= hi; ++k) {
        if (downward_only && k > 0) continue;
        const double f = overlap(p, q, k);
        if (f > best.fidelity) best = {k, f};
    }
    return best;
}

/// Largest-remainder rounding of w * n to integers summing to n.
inline std::vector<int> typical_counts(const std::vector<double> &w, int n) {
    std::vector<int> counts(w.size());
    std::vector<std::pair<double, std::size_t>> rem;
    int used = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = w[i] * n;
        counts[i] = static_cast<int>(std::floor(x));
        used += counts[i];
        rem.emplace_back(x - counts[i], i);
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto &a, const auto &b) { return a.first > b.first; });
    for (std::size_t i = 0; used < n && i < rem.size(); ++i, ++used) ++counts[rem[i].second];
    return counts;
}

inline void check_window(const WeightState &s, int n, int window) {
    if (s.ssr() != Ssr::Z2 && static_cast<long>(s.max_label()) * n > window) {
        throw Error(ErrorKind::WindowExceeded, "tensor power exceeds the label window");
    }
}

}  // namespace detail

/// Finite-N fidelity achieved when converting N copies of source to M copies
/// of target. M defaults to floor(N * rate).
inline RateEvidence verify_rate(const WeightState &source, const WeightState &target, int n,
                                std::optional<int> m_opt = std::nullopt, int window = kDefaultWindow) {
    detail::require_pair(source, target);
    if (n < 1) throw Error(ErrorKind::ParseError, "N must be at least 1");
    RateEvidence ev;
    ev.n = n;
    if (m_opt) {
        ev.m = *m_opt;
    } else {
        auto r = rate(source, target);
        double rv = r.rate.value;
        if (source.ssr() == Ssr::U1 && std::isnan(rv)) rv = number_variance(source) / number_variance(target);
        if (std::isnan(rv) || std::isinf(rv)) {
            throw Error(ErrorKind::ParseError, "no finite rate to derive M from; pass M explicitly");
        }
        ev.m = static_cast<int>(std::floor(n * rv + 1e-9));
    }
    if (ev.m < 1) throw Error(ErrorKind::ParseError, "M must be at least 1");
    detail::check_window(source, n, window);
    detail::check_window(target, ev.m, window);

    if (source.ssr() == Ssr::Z2) {
        // Deterministic conversion reaches any state at most as chiral as the source power.
        const auto sp = tensor_power(source, n), tp = tensor_power(target, ev.m);
        const double cs = is_resource(sp) ? chirality(sp) : 0.0, ct = is_resource(tp) ? chirality(tp) : 0.0;
        if (cs >= ct - tolerance()) {
            ev.fidelity = 1.0;
        } else {
            const int heavy = detail::heavy_label(tp);
            WeightMap best{{heavy, 1.0 - cs / 2.0}};
            if (cs > 0.0) best[heavy ^ 1] = cs / 2.0;
            ev.fidelity = fidelity(WeightState(Ssr::Z2, best), tp);
        }
        return ev;
    }

    const auto q = detail::dense_power(detail::to_dense(target), ev.m);
    if (source.ssr() == Ssr::U1) {
        const auto p = detail::dense_power(detail::to_dense(source), n);
        const auto choice = detail::best_shift(p, q, false);
        ev.fidelity = choice.fidelity;
        ev.shift_used = choice.shift;
        return ev;
    }

    detail::Dense p;
    const double vs = j_variance(source) * n, vt = j_variance(target) * ev.m;
    if (vs > vt * (1.0 + 1e-12) && is_resource(target) && support_gcd(source) > 0) {
        auto vr = variance_reduction_measurement(source, std::min(j_variance(source), vt / n));
        std::vector<double> w;
        for (const auto &br : vr.ensemble) w.push_back(br.first);
        const auto counts = detail::typical_counts(w, n);
        p = detail::Dense{0, {1.0}};
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] == 0) continue;
            p = detail::convolve(p, detail::dense_power(detail::to_dense(vr.ensemble[i].second), counts[i]));
        }
        ev.variance_reduced = true;
    } else {
        p = detail::dense_power(detail::to_dense(source), n);
    }
    const auto choice = detail::best_shift(p, q, true);
    ev.fidelity = choice.fidelity;
    ev.shift_used = choice.shift;
    return ev;
}

/// verify_rate for one N and several M. For U1 the target powers are built
/// incrementally.
inline std::vector<RateEvidence> fidelity_curve(const WeightState &source, const WeightState &target, int n,
                                                const std::vector<int> &ms, int window = kDefaultWindow) {
    detail::require_pair(source, target);
    if (source.ssr() != Ssr::U1) {
        std::vector<RateEvidence> out;
        for (int m : ms) out.push_back(verify_rate(source, target, n, m, window));
        return out;
    }
    detail::check_window(source, n, window);
    const auto p = detail::dense_power(detail::to_dense(source), n);
    const auto base = detail::to_dense(target);
    std::vector<int> sorted = ms;
    std::sort(sorted.begin(), sorted.end());
    std::vector<RateEvidence> out;
    detail::Dense q{0, {1.0}};
    int have = 0;
    for (int m : sorted) {
        if (m < 1) throw Error(ErrorKind::ParseError, "M must be at least 1");
        detail::check_window(target, m, window);
        while (have < m) {
            q = detail::convolve(q, base);
            ++have;
        }
        const auto choice = detail::best_shift(p, q, false);
        out.push_back(RateEvidence{n, m, choice.fidelity, choice.shift, false});
    }
    return out;
}

}  // namespace frameness
