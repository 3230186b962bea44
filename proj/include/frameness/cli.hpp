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

// Command-line front end. run() is the whole program; tools/frameness.cpp
// only forwards argv to it.
//
// Exit codes: 0 success (an infeasible verdict is a success), 1 usage error,
// 2 domain error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frameness/asymptotic.hpp"
#include "frameness/channels.hpp"
#include "frameness/error.hpp"
#include "frameness/json_io.hpp"
#include "frameness/monotones.hpp"
#include "frameness/singlecopy.hpp"
#include "frameness/states.hpp"
#include "frameness/wigner.hpp"

namespace frameness::cli {

using io::Json;

struct Options {
    std::string ssr;
    double tol = 0.0;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = kDefaultSeed;
    int window = kDefaultWindow;

    std::string state, source, target, targets, channel, rho;
    std::string source_id = "source", target_id = "target";
    std::vector<int> n, m;
    int trials = 1000;
    std::vector<std::string> three_j;
};

/// Raised for well-formed argv that asks for something unsupported.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Inline JSON when the text starts with '{' or '[', otherwise a file path.
inline Json load(const std::string &text, const std::string &what) {
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && (text[start] == '{' || text[start] == '[')) return io::parse_json(text);
    std::ifstream f(text);
    if (!f) throw Error(ErrorKind::ParseError, "cannot read " + what + " file '" + text + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return io::parse_json(ss.str());
}

inline std::optional<Ssr> ssr_option(const Options &o) {
    if (o.ssr.empty()) return std::nullopt;
    return parse_ssr(o.ssr);
}

inline WeightState load_state(const Options &o, const std::string &text, const std::string &what) {
    if (text.empty()) throw UsageError("--" + what + " is required");
    return io::state_from_json(load(text, what), ssr_option(o));
}

class TolGuard {
   public:
    TolGuard() : saved_(tolerance()) {}
    ~TolGuard() { set_tolerance(saved_); }
    TolGuard(const TolGuard &) = delete;
    TolGuard &operator=(const TolGuard &) = delete;

   private:
    double saved_;
};

struct Output {
    Json result;
    std::optional<std::string> csv;
};

inline std::string csv_header() {
    std::ostringstream os;
    os << "# frameness " << kVersion << " tolerance=" << io::csv_number(tolerance()) << '\n';
    return os.str();
}

inline Output dispatch(const std::string &verb, const Options &o) {
    Output out;
    const bool csv = o.format == "csv";
    auto no_csv = [&] {
        if (csv) throw UsageError("CSV output is not available for " + verb);
    };

    if (verb == "spectrum") {
        const auto s = load_state(o, o.state, "state");
        const auto spec = spectrum(s);
        out.result = {{"labels", spec.labels},
                      {"cardinality", spec.cardinality()},
                      {"gapless", is_gapless(s)},
                      {"resource", is_resource(s)},
                      {"spacing", support_gcd(s)}};
        if (csv) out.csv = io::weights_csv(s);
    } else if (verb == "monotones") {
        no_csv();
        out.result = io::to_json(monotone_report(load_state(o, o.state, "state")));
    } else if (verb == "det") {
        no_csv();
        out.result = io::to_json(det_feasible(load_state(o, o.source, "source"), load_state(o, o.target, "target")));
    } else if (verb == "stoch") {
        no_csv();
        out.result = io::to_json(stoch_feasible(load_state(o, o.source, "source"), load_state(o, o.target, "target")));
    } else if (verb == "maxprob") {
        no_csv();
        out.result = io::to_json(max_prob(load_state(o, o.source, "source"), load_state(o, o.target, "target")));
    } else if (verb == "ensemble-z2") {
        no_csv();
        const auto source = load_state(o, o.source, "source");
        if (o.targets.empty()) throw UsageError("--targets is required");
        const Json list = load(o.targets, "targets");
        if (!list.is_array()) throw Error(ErrorKind::ParseError, "targets must be an array");
        std::vector<std::pair<double, WeightState>> targets;
        for (const auto &item : list) {
            if (item.is_array() && item.size() == 2) {
                targets.emplace_back(io::number(item[0], "ensemble weight"), io::state_from_json(item[1], Ssr::Z2));
            } else if (item.is_object() && item.contains("weight") && item.contains("state")) {
                targets.emplace_back(io::number(item.at("weight"), "ensemble weight"),
                                     io::state_from_json(item.at("state"), Ssr::Z2));
            } else {
                throw Error(ErrorKind::ParseError, "each target is [weight, state] or {\"weight\", \"state\"}");
            }
        }
        const auto ch = synthesize_ensemble_z2(source, targets);
        out.result = {{"channel", io::to_json(ch)}, {"branches", io::to_json(apply(ch, source))}};
    } else if (verb == "rate" || verb == "verify-rate") {
        const auto source = load_state(o, o.source, "source");
        const auto target = load_state(o, o.target, "target");
        const auto r = rate(source, target);
        if (verb == "verify-rate" && o.n.empty()) throw UsageError("verify-rate needs at least one --N");
        std::vector<RateEvidence> evidence;
        for (int n : o.n) {
            if (o.m.empty()) {
                evidence.push_back(verify_rate(source, target, n, std::nullopt, o.window));
            } else {
                auto curve = fidelity_curve(source, target, n, o.m, o.window);
                evidence.insert(evidence.end(), curve.begin(), curve.end());
            }
        }
        Json ev = Json::array();
        for (const auto &e : evidence) ev.push_back(io::to_json(e));
        out.result = io::to_json(r);
        out.result["source_id"] = o.source_id;
        out.result["target_id"] = o.target_id;
        out.result["evidence"] = ev;
        if (csv) {
            std::string text = std::string(io::kRateCsvHeader) + "\n";
            if (evidence.empty()) {
                text += o.source_id + "," + o.target_id + "," + io::csv_number(r.rate.value) + "," +
                        (r.reversible ? "true" : "false") + ",,,\n";
            }
            for (const auto &e : evidence) text += io::rate_csv_row(o.source_id, o.target_id, r, e) + "\n";
            out.csv = text;
        }
    } else if (verb == "tensor-power") {
        const auto s = load_state(o, o.state, "state");
        if (o.n.size() != 1) throw UsageError("tensor-power needs exactly one --N");
        const auto p = tensor_power(s, o.n.front(), o.window);
        out.result = io::to_json(p);
        if (csv) out.csv = io::weights_csv(p);
    } else if (verb == "apply-channel") {
        no_csv();
        if (o.channel.empty()) throw UsageError("--channel is required");
        const auto ch = io::channel_from_json(load(o.channel, "channel"), ssr_option(o));
        const auto s = load_state(o, o.state, "state");
        double total = 0.0;
        const auto branches = apply(ch, s);
        for (const auto &b : branches) total += b.probability;
        out.result = {{"channel", io::to_json(ch)}, {"branches", io::to_json(branches)}, {"total_probability", total}};
    } else if (verb == "twirl") {
        no_csv();
        if (o.rho.empty()) throw UsageError("--rho is required");
        const auto in = io::density_from_json(load(o.rho, "rho"), ssr_option(o));
        out.result = {{"basis", io::to_json(in.basis)}, {"rho", io::to_json(twirl(in.rho, in.basis))}};
    } else if (verb == "audit") {
        no_csv();
        const auto ssr = ssr_option(o);
        if (!ssr) throw UsageError("audit needs --ssr");
        out.result = io::to_json(monotonicity_audit(*ssr, o.trials, o.seed));
    } else if (verb == "wigner3j") {
        if (o.three_j.size() != 6) throw UsageError("wigner3j takes j1 j2 j3 m1 m2 m3");
        HalfInt a[6];
        for (int i = 0; i < 6; ++i) {
            try {
                a[i] = HalfInt::parse(o.three_j[static_cast<std::size_t>(i)]);
            } catch (const std::invalid_argument &e) {
                throw UsageError(e.what());
            }
        }
        const double v = wigner::three_j(a[0], a[1], a[2], a[3], a[4], a[5]);
        out.result = {{"value", v}};
        if (csv) out.csv = "value\n" + io::csv_number(v) + "\n";
    }
    return out;
}

}  // namespace detail

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    detail::TolGuard guard;
    Options o;
    CLI::App app{"Frameness calculator for Z2, U(1) and SU(2) superselection rules", "frameness"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(kVersion));

    auto globals = [&](CLI::App *a) {
        a->add_option("--ssr", o.ssr, "Superselection rule: z2, u1 or su2")->check(CLI::IsMember({"z2", "u1", "su2", "Z2", "U1", "SU2"}));
        a->add_option("--tol", o.tol, "Global tolerance (default 1e-9 or FRAMENESS_TOL)");
        a->add_option("--out", o.out, "Write the report to this file");
        a->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        a->add_option("--seed", o.seed, "Random seed");
        a->add_option("--window", o.window, "Largest label a tensor power may reach");
    };
    globals(&app);

    auto sub = [&](const std::string &name, const std::string &help) {
        CLI::App *s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto state_opt = [&](CLI::App *s) { s->add_option("--state", o.state, "State JSON or file")->required(); };
    auto pair_opts = [&](CLI::App *s) {
        s->add_option("--source", o.source, "Source state JSON or file")->required();
        s->add_option("--target", o.target, "Target state JSON or file")->required();
    };

    state_opt(sub("spectrum", "Spectrum and gap structure of a state"));
    state_opt(sub("monotones", "Every frameness measure of a state"));
    pair_opts(sub("det", "Deterministic convertibility with a realizing channel"));
    pair_opts(sub("stoch", "Stochastic convertibility and admissible shifts"));
    pair_opts(sub("maxprob", "Maximum single-copy conversion probability"));
    {
        auto *s = sub("ensemble-z2", "Z2 channel producing a target ensemble");
        s->add_option("--source", o.source, "Source state")->required();
        s->add_option("--targets", o.targets, "[[w, state], ...]")->required();
    }
    for (const char *name : {"rate", "verify-rate"}) {
        auto *s = sub(name, std::string(name) == "rate" ? "Asymptotic conversion rate" : "Finite-N fidelity evidence for a rate");
        pair_opts(s);
        s->add_option("--N", o.n, "Number of source copies (repeatable)");
        s->add_option("--M", o.m, "Number of target copies (repeatable)");
        s->add_option("--source-id", o.source_id, "Label for CSV rows");
        s->add_option("--target-id", o.target_id, "Label for CSV rows");
    }
    {
        auto *s = sub("tensor-power", "Exact weights of N copies");
        state_opt(s);
        s->add_option("--N", o.n, "Number of copies")->required();
    }
    {
        auto *s = sub("apply-channel", "Apply a diagonal invariant channel to a state");
        s->add_option("--channel", o.channel, "Channel JSON or file")->required();
        state_opt(s);
    }
    sub("twirl", "Group average of a density matrix")->add_option("--rho", o.rho, "Density matrix JSON or file")->required();
    sub("audit", "Randomized ensemble-monotonicity audit")->add_option("--trials", o.trials, "Number of trials");
    sub("wigner3j", "Wigner 3j symbol")->add_option("args", o.three_j, "j1 j2 j3 m1 m2 m3")->expected(6);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    Json report{{"frameness", io::header()}, {"verb", verb}};
    std::string text;
    int code = 0;
    try {
        if (app.count("--tol") > 0) {
            try {
                set_tolerance(o.tol);
            } catch (const std::invalid_argument &e) {
                throw UsageError(e.what());
            }
            report["frameness"] = io::header();
        }
        auto result = detail::dispatch(verb, o);
        if (result.csv) {
            text = detail::csv_header() + *result.csv;
        } else {
            report["result"] = std::move(result.result);
            text = report.dump(2) + "\n";
        }
    } catch (const UsageError &e) {
        err << "frameness: " << e.what() << '\n';
        return 1;
    } catch (const Error &e) {
        err << "frameness: " << to_string(e.kind()) << ": " << e.what() << '\n';
        report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        text = report.dump(2) + "\n";
        code = 2;
    }

    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream f(o.out);
        if (!f) {
            err << "frameness: cannot write '" << o.out << "'\n";
            return 1;
        }
        f << text;
    }
    return code;
}

}  // namespace frameness::cli
