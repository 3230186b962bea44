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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check records the first mismatch it sees.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "frameness.hpp"

namespace {

using namespace frameness;
using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::string first_failure;

    void expect(bool cond, const std::string &what) {
        if (!cond && ok) first_failure = what;
        ok = ok && cond;
    }
    void near(double got, double want, double tol, const std::string &what) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want << " +- " << tol;
        expect(std::abs(got - want) <= tol, os.str());
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

WeightState uniform(Ssr ssr, std::vector<int> labels) {
    WeightMap m;
    for (int l : labels) m[l] = 1.0;
    return normalize(m, ssr);
}

WeightState z2(double p0) { return WeightState(Ssr::Z2, {{0, p0}, {1, 1.0 - p0}}); }

void expect_realizes(Check &c, const FeasibilityCertificate &cert, const WeightState &source, const WeightState &target) {
    c.expect(cert.realizing_channel.has_value(), "certificate without channel");
    if (!cert.realizing_channel) return;
    double total = 0.0;
    for (const auto &b : apply(*cert.realizing_channel, source)) {
        total += b.probability;
        c.expect(b.state.size() == target.size(), "branch support differs from target");
        for (const auto &[l, q] : target.weights()) c.near(b.state.weight(l), q, 1e-8, "branch weight");
    }
    c.near(total, 1.0, 1e-9, "channel total probability");
}

void expect_shifts(Check &c, const FeasibilityCertificate &cert, const std::map<int, double> &want) {
    c.expect(cert.feasible, "expected feasible");
    c.expect(cert.shift_weights.size() == want.size(), "wrong number of shifts");
    for (const auto &[k, w] : want) {
        auto it = cert.shift_weights.find(k);
        c.expect(it != cert.shift_weights.end(), "missing shift " + std::to_string(k));
        if (it != cert.shift_weights.end()) c.near(it->second, w, 1e-9, "shift weight " + std::to_string(k));
    }
}

Check deterministic_examples() {
    Check c;
    const auto t0 = Clock::now();
    const auto target = uniform(Ssr::U1, {0, 1});
    const std::vector<std::pair<WeightState, std::map<int, double>>> cases{
        {uniform(Ssr::U1, {1, 2}), {{1, 1.0}}},
        {uniform(Ssr::U1, {0, 1, 2, 3}), {{0, 0.5}, {2, 0.5}}},
        {normalize({{0, 0.25}, {1, 0.5}, {2, 0.25}}, Ssr::U1), {{0, 0.5}, {1, 0.5}}},
    };
    for (const auto &[source, want] : cases) {
        const auto cert = det_feasible(source, target);
        expect_shifts(c, cert, want);
        expect_realizes(c, cert, source, target);
    }
    c.expect(seconds_since(t0) < 1.0, "slower than 1 s");
    return c;
}

Check spectrum_inclusion_example() {
    Check c;
    const auto psi = uniform(Ssr::U1, {1, 3, 4, 6, 10, 11, 12}), phi = uniform(Ssr::U1, {7, 13, 14});
    const auto v = stoch_feasible(psi, phi);
    c.expect(v.feasible, "not stochastically feasible");
    c.expect(std::find(v.shifts.begin(), v.shifts.end(), 3) != v.shifts.end(), "shift 3 not admissible");
    const auto fp = stochastic_monotones(psi), ff = stochastic_monotones(phi);
    c.expect(fp.mons == std::set<int>{11, 10, 9, 5, 3, 2}, "Mons of the source");
    c.expect(ff.mons == std::set<int>{7, 6}, "Mons of the target");
    const auto ls = mons_inclusion_shifts(ff.mons, fp.mons);
    c.expect(std::find(ls.begin(), ls.end(), 3) != ls.end(), "Mons inclusion fails at l = 3");
    for (int m : ff.mons) c.expect(fp.mons.count(m + 3) == 1, "Mons(phi) + 3 not inside Mons(psi)");
    return c;
}

Check walls() {
    Check c;
    auto check = [&](const WeightState &a, const WeightState &b, const std::string &name) {
        const auto t0 = Clock::now();
        const bool feasible = stoch_feasible(a, b).feasible;
        const double dt = seconds_since(t0);
        c.expect(!feasible, name + " is feasible");
        c.expect(dt < 1e-3, name + " took longer than 1 ms");
    };
    const auto ab = uniform(Ssr::U1, {0, 1}), ac = uniform(Ssr::U1, {0, 2});
    const auto hi = uniform(Ssr::SU2, {4, 6}), lo = uniform(Ssr::SU2, {0, 2, 4});
    check(ab, ac, "refbit -> gapped");
    check(ac, ab, "gapped -> refbit");
    check(hi, lo, "j {2,3} -> j {0,1,2}");
    check(lo, hi, "j {0,1,2} -> j {2,3}");
    return c;
}

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

Check max_prob_oracles() {
    Check c;
    const auto t0 = Clock::now();
    for (Ssr ssr : {Ssr::U1, Ssr::SU2}) {
        std::mt19937_64 rng(ssr == Ssr::U1 ? 401 : 402);
        int done = 0, drawn = 0;
        while (done < 200 && drawn < 200000) {
            ++drawn;
            auto a = detail::random_state(ssr, rng, 9, 6);
            auto b = detail::random_state(ssr, rng, 6, 4);
            if (!is_resource(a) || !is_resource(b)) continue;
            const auto v = stoch_feasible(a, b);
            if (!v.feasible || v.shifts.size() != 1) continue;
            ++done;
            const auto r = max_prob(a, b);
            c.expect(r.method == MaxProbMethod::ClosedForm, "closed form not used");
            c.near(r.probability, grid_single_shift(a, b, v.shifts.front()), 2e-3, "grid search");
        }
        c.expect(done == 200, "too few single-shift pairs");
    }
    std::mt19937_64 rng(403);
    for (int t = 0; t < 200; ++t) {
        auto a = detail::random_state(Ssr::Z2, rng), b = detail::random_state(Ssr::Z2, rng);
        const double p = max_prob(a, b).probability;
        double branch = 0.0;
        for (const auto &br : apply(z2_max_prob_protocol(a, b), a)) {
            if (br.outcome == 0) branch += br.probability;
        }
        c.near(p, branch, 1e-9, "two-outcome protocol");
        c.near(p, std::min(1.0, chirality(a) / chirality(b)), 1e-12, "chirality ratio");
    }
    c.expect(seconds_since(t0) < 60.0, "slower than 60 s");
    return c;
}

Check audits() {
    Check c;
    const auto t0 = Clock::now();
    for (Ssr ssr : {Ssr::Z2, Ssr::U1, Ssr::SU2}) {
        try {
            const auto report = monotonicity_audit(ssr, 1000, 20260415);
            c.expect(report.violations.empty(), std::string("violations under ") + std::string(to_string(ssr)));
            c.expect(report.trials == 1000, "trial count");
            if (ssr == Ssr::Z2) {
                bool increase = false;
                for (const auto &inc : report.f_infinity_increases) {
                    increase = increase || inc.average_after.value > inc.before.value;
                }
                c.expect(increase, "no F-infinity increase");
            }
        } catch (const Error &e) {
            c.expect(false, e.what());
        }
    }
    c.expect(seconds_since(t0) < 120.0, "slower than 120 s");
    return c;
}

Check asymptotics() {
    Check c;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(600);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const auto s = z2(u(rng));
        for (int n = 1; n <= 60; ++n) {
            c.near(tensor_power(s, n).weight(0), z2_power_closed_form(s, n).first, 1e-12, "parity closed form");
        }
    }
    const auto qutrit = uniform(Ssr::U1, {0, 1, 2}), refbit = uniform(Ssr::U1, {0, 1});
    c.expect(verify_rate(qutrit, refbit, 300, 800).fidelity >= 0.99, "300 -> 800 fidelity");
    const auto gapped = uniform(Ssr::U1, {0, 2});
    for (int n = 1; n <= 400; ++n) {
        std::vector<int> ms;
        for (int m = 1; m <= 2 * n + 2; ++m) ms.push_back(m);
        for (const auto &e : fidelity_curve(refbit, gapped, n, ms)) {
            c.expect(e.fidelity <= 1.0 - 1e-3, "gapped target reached at N = " + std::to_string(n) + ", M = " + std::to_string(e.m));
        }
    }
    const auto a = uniform(Ssr::SU2, {0, 2}), b = normalize({{0, 0.25}, {2, 0.75}}, Ssr::SU2);
    c.expect(std::abs(j_mean(a) / j_mean(b) - j_variance(a) / j_variance(b)) > 1e-6, "ratios coincide");
    const auto ab = rate(a, b), ba = rate(b, a);
    c.near(ab.rate.value, std::min(j_mean(a) / j_mean(b), j_variance(a) / j_variance(b)), 1e-12, "min formula");
    c.expect(verify_rate(a, b, 400).fidelity >= 0.99, "SU2 forward fidelity");
    c.expect(verify_rate(b, a, 400).fidelity >= 0.99, "SU2 reverse fidelity");
    c.expect(ab.rate.value * ba.rate.value < 1.0, "rate product not below 1");
    c.expect(seconds_since(t0) < 300.0, "slower than 5 min");
    return c;
}

// 1 / sqrt(n) rounded once from 100 significant digits.
double correctly_rounded_inv_sqrt(int n) {
    using boost::multiprecision::cpp_bin_float_100;
    return boost::multiprecision::sqrt(cpp_bin_float_100(1) / cpp_bin_float_100(n)).convert_to<double>();
}

Check wigner_kernel() {
    Check c;
    using wigner::three_j;
    auto H = HalfInt::from_twice;
    for (int tj1 = 0; tj1 <= 20; ++tj1) {
        for (int tj2 = 0; tj2 <= 20; ++tj2) {
            for (int tj3 = std::abs(tj1 - tj2); tj3 <= std::min(20, tj1 + tj2); tj3 += 2) {
                for (int tm3 = -tj3; tm3 <= tj3; tm3 += 2) {
                    double sum = 0.0;
                    for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2) {
                        const int tm2 = -tm1 - tm3;
                        if (std::abs(tm2) > tj2) continue;
                        const double v = three_j(H(tj1), H(tj2), H(tj3), H(tm1), H(tm2), H(tm3));
                        sum += v * v;
                    }
                    c.near((tj3 + 1) * sum, 1.0, 1e-12, "orthogonality");
                }
            }
        }
    }
    for (int tj = 0; tj <= 20; ++tj) {
        for (int tjp = 0; tjp <= 20; ++tjp) {
            for (int tm = -tj; tm <= tj; tm += 2) {
                const double got = three_j(H(tjp), H(0), H(tj), H(-tm), H(0), H(tm));
                double want = 0.0;
                if (tj == tjp) want = (((tjp - tm) / 2) % 2 == 0 ? 1.0 : -1.0) * correctly_rounded_inv_sqrt(tj + 1);
                c.expect(got == want, "rank-zero closed form");
            }
        }
    }
    std::mt19937_64 rng(700);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const int trank = std::uniform_int_distribution<int>(0, 4)(rng);
        ReducedElements f;
        for (int tjp = 0; tjp <= 8; ++tjp) {
            for (int tj = 0; tj <= 8; ++tj) {
                if (triangle_allows(tjp, trank, tj)) f[{tjp, tj}] = Complex(n(rng), n(rng));
            }
        }
        c.expect(verify_covariance(build_spherical_tensor(H(trank), f, H(8))) < 1e-9, "covariance residual");
    }
    return c;
}

Check stretched_separation() {
    Check c;
    std::mt19937_64 rng(800);
    std::normal_distribution<double> n(0.0, 1.0);
    auto H = HalfInt::from_twice;
    auto output = [](const SphericalTensorKraus &t, const WeightState &s, const Basis &basis) {
        return apply_kraus(tensor_components(t.rank, t.f, basis), stretched_vector(s, basis));
    };
    const Basis six = angular_basis({0, 1, 2, 3, 4, 5, 6});
    for (int t = 0; t < 50; ++t) {
        const int trank = std::uniform_int_distribution<int>(1, 4)(rng);
        ReducedElements f;
        for (int tjp = 0; tjp <= 6; ++tjp) {
            for (int tj = 0; tj <= 6; ++tj) {
                if (triangle_allows(tjp, trank, tj)) f[{tjp, tj}] = Complex(n(rng), n(rng));
            }
        }
        const auto tensor = build_spherical_tensor(H(trank), f, H(6));
        const auto s = uniform(Ssr::SU2, {2, 4, 6});
        c.expect(purity(output(tensor, s, six)) < 1.0 - 1e-6, "non-delta output is pure");
    }
    const Basis eight = angular_basis({0, 1, 2, 3, 4, 5, 6, 7, 8});
    for (int t = 0; t < 50; ++t) {
        const int trank = std::uniform_int_distribution<int>(0, 3)(rng);
        ReducedElements f;
        for (int tj = trank; tj <= 8; ++tj) f[{tj - trank, tj}] = Complex(n(rng), n(rng));
        const auto tensor = build_spherical_tensor(H(trank), f, H(8));
        const auto s = normalize({{trank + 1, 0.3}, {trank + 2, 0.3}, {8, 0.4}}, Ssr::SU2);
        const Matrix rho = output(tensor, s, eight);
        c.expect(purity(rho) > 1.0 - 1e-9, "delta output is mixed");
        c.expect(stretched_weight(rho, eight) > 1.0 - 1e-9, "delta output leaves the stretched class");
    }
    return c;
}

Check parity_measures() {
    Check c;
    std::mt19937_64 rng(900);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (int t = 0; t < 200; ++t) {
        const auto a = z2(u(rng)), b = z2(u(rng));
        const auto fa = z2_asymptotic(a), fb = z2_asymptotic(b), fab = z2_asymptotic(tensor(a, b));
        if (fa.is_infinite() || fb.is_infinite()) {
            c.expect(fab.is_infinite(), "additivity with |+>");
            continue;
        }
        c.near(fab.value, fa.value + fb.value, 1e-9, "strong additivity");
        c.near(fa.value, -std::log2(1.0 - chirality(a)), 1e-9, "chirality identity");
    }
    c.expect(z2_asymptotic(z2(0.75)).value == 1.0, "F-infinity at 3/4");
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"deterministic number examples", deterministic_examples},
        {"spectrum and Mons inclusion example", spectrum_inclusion_example},
        {"non-convertibility walls", walls},
        {"max-probability oracles", max_prob_oracles},
        {"ensemble monotonicity audits", audits},
        {"asymptotic rates at desk scale", asymptotics},
        {"Wigner kernel", wigner_kernel},
        {"stretched-class separation", stretched_separation},
        {"parity measure algebra", parity_measures},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception &e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        std::printf("[%s] %zu %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), seconds_since(t0),
                    c.ok ? "" : ": ", c.first_failure.c_str());
        std::fflush(stdout);
        failures += c.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
