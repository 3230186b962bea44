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

// JSON and CSV encodings of states, channels and reports.
//
// States:   {"ssr": "u1", "weights": {"0": 0.5, "1": 0.5}}  (+ "axis" for SU2)
// Channels: {"ssr": "u1", "ops": [{"shift": -1, "profile": {"1": [re, im]}}]}
// SU2 labels are 2j.

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frameness/asymptotic.hpp"
#include "frameness/channels.hpp"
#include "frameness/error.hpp"
#include "frameness/measures.hpp"
#include "frameness/monotones.hpp"
#include "frameness/singlecopy.hpp"
#include "frameness/states.hpp"

namespace frameness::io {

using Json = nlohmann::json;

inline Json header() { return {{"version", std::string(kVersion)}, {"tolerance", tolerance()}}; }

inline Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
}

inline int parse_label(const std::string &key) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(key, &used);
    } catch (const std::logic_error &) {
        used = 0;
    }
    if (used != key.size() || key.empty()) throw Error(ErrorKind::ParseError, "label '" + key + "' is not an integer");
    return v;
}

inline double number(const Json &j, const std::string &what) {
    if (!j.is_number()) throw Error(ErrorKind::ParseError, what + " must be a number");
    return j.get<double>();
}

inline Json extended(const ExtendedReal &x) {
    if (std::isnan(x.value)) return nullptr;
    if (x.is_infinite()) return "inf";
    return x.value;
}

inline Json finite_or_null(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
    return x;
}

// ---------------------------------------------------------------------------
// States.

inline Json to_json(const WeightState &s) {
    Json w = Json::object();
    for (const auto &[l, p] : s.weights()) w[std::to_string(l)] = p;
    Json out{{"ssr", std::string(to_string(s.ssr()))}, {"weights", w}};
    if (!s.axis().empty()) out["axis"] = s.axis();
    return out;
}

/// Accepts the full state object or a bare label map (then `ssr` is needed).
/// Input that already satisfies the invariants is kept exactly; anything
/// else goes through normalize().
inline WeightState state_from_json(const Json &j, std::optional<Ssr> ssr = std::nullopt) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "a state must be a JSON object");
    const Json *weights = &j;
    std::string axis;
    if (j.contains("weights")) {
        for (const auto &[key, value] : j.items()) {
            if (key != "weights" && key != "ssr" && key != "axis") {
                throw Error(ErrorKind::ParseError, "unknown state field '" + key + "'");
            }
        }
        weights = &j.at("weights");
        if (j.contains("ssr")) {
            if (!j.at("ssr").is_string()) throw Error(ErrorKind::ParseError, "ssr must be a string");
            const Ssr given = parse_ssr(j.at("ssr").get<std::string>());
            if (ssr && *ssr != given) throw Error(ErrorKind::SsrMismatch, "state ssr disagrees with --ssr");
            ssr = given;
        }
        if (j.contains("axis")) {
            if (!j.at("axis").is_string()) throw Error(ErrorKind::ParseError, "axis must be a string");
            axis = j.at("axis").get<std::string>();
        }
    }
    if (!ssr) throw Error(ErrorKind::ParseError, "state needs a superselection rule");
    if (!weights->is_object()) throw Error(ErrorKind::ParseError, "weights must be an object of label: weight");
    WeightMap raw;
    bool clean = true;
    double total = 0.0;
    for (const auto &[key, value] : weights->items()) {
        const double w = number(value, "weight of label " + key);
        raw[parse_label(key)] = w;
        if (!(w > 0.0)) clean = false;
        total += w;
    }
    if (clean && !raw.empty() && std::abs(total - 1.0) <= tolerance()) return WeightState(*ssr, std::move(raw), axis);
    return normalize(raw, *ssr, axis);
}

// ---------------------------------------------------------------------------
// Channels.

inline Json to_json(const KrausChannel &ch) {
    Json ops = Json::array();
    for (const auto &op : ch.ops) {
        Json profile = Json::object();
        for (const auto &[l, c] : op.profile) profile[std::to_string(l)] = Json::array({c.real(), c.imag()});
        Json o{{"shift", op.shift}, {"profile", profile}};
        if (op.outcome >= 0) o["outcome"] = op.outcome;
        ops.push_back(o);
    }
    return {{"ssr", std::string(to_string(ch.ssr))}, {"ops", ops}, {"trace_preserving", ch.trace_preserving}};
}

inline Complex amplitude(const Json &v, const std::string &what) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw Error(ErrorKind::ParseError, what + " must be a number or [re, im]");
}

inline KrausChannel channel_from_json(const Json &j, std::optional<Ssr> ssr = std::nullopt) {
    if (!j.is_object() || !j.contains("ops")) throw Error(ErrorKind::ParseError, "a channel needs an \"ops\" array");
    if (j.contains("ssr")) {
        const Ssr given = parse_ssr(j.at("ssr").get<std::string>());
        if (ssr && *ssr != given) throw Error(ErrorKind::SsrMismatch, "channel ssr disagrees with --ssr");
        ssr = given;
    }
    if (!ssr) throw Error(ErrorKind::ParseError, "channel needs a superselection rule");
    std::vector<DiagonalKraus> ops;
    for (const auto &o : j.at("ops")) {
        if (!o.is_object() || !o.contains("shift") || !o.contains("profile")) {
            throw Error(ErrorKind::ParseError, "each op needs \"shift\" and \"profile\"");
        }
        if (!o.at("shift").is_number_integer()) throw Error(ErrorKind::ParseError, "shift must be an integer");
        DiagonalKraus op;
        op.shift = o.at("shift").get<int>();
        if (o.contains("outcome")) op.outcome = o.at("outcome").get<int>();
        for (const auto &[key, value] : o.at("profile").items()) {
            op.profile[parse_label(key)] = amplitude(value, "profile entry " + key);
        }
        ops.push_back(std::move(op));
    }
    return build_diagonal_channel(*ssr, std::move(ops));
}

// ---------------------------------------------------------------------------
// Reports.

template <class Map>
inline Json shift_map(const Map &m) {
    Json out = Json::object();
    for (const auto &[k, v] : m) out[std::to_string(k)] = v;
    return out;
}

inline Json to_json(const FeasibilityCertificate &c) {
    Json out{{"feasible", c.feasible}, {"shift_weights", shift_map(c.shift_weights)}};
    if (c.realizing_channel) out["realizing_channel"] = to_json(*c.realizing_channel);
    if (!c.witness.empty()) out["witness"] = c.witness;
    return out;
}

inline Json to_json(const StochasticVerdict &v) { return {{"feasible", v.feasible}, {"shifts", v.shifts}}; }

inline Json to_json(const MaxProbResult &r) {
    return {{"probability", r.probability},
            {"method", std::string(to_string(r.method))},
            {"per_shift_weights", shift_map(r.per_shift_weights)}};
}

inline Json to_json(const StochasticFragment &f) {
    Json out{{"cardinality", f.cardinality}, {"differences", f.differences}, {"mons", f.mons}};
    if (f.j_max) out["j_max"] = *f.j_max;
    if (f.chiral_cardinality) out["chiral_cardinality"] = *f.chiral_cardinality;
    return out;
}

inline Json to_json(const MonotoneReport &r) {
    Json out{{"ssr", std::string(to_string(r.ssr))}, {"stochastic", to_json(r.stochastic)}};
    if (r.chirality) out["chirality"] = *r.chirality;
    if (r.f_infinity) out["f_infinity"] = extended(*r.f_infinity);
    if (r.variance) out["variance"] = *r.variance;
    if (r.mean) out["mean"] = *r.mean;
    return out;
}

inline Json to_json(const AuditReport &r) {
    Json violations = Json::array();
    for (const auto &v : r.violations) {
        violations.push_back({{"monotone", v.monotone},
                              {"before", v.before},
                              {"average_after", v.average_after},
                              {"instance", parse_json(v.instance)}});
    }
    Json out{{"ssr", std::string(to_string(r.ssr))},
             {"trials", r.trials},
             {"seed", r.seed},
             {"monotones", r.monotones},
             {"violations", violations},
             {"max_excess", finite_or_null(r.max_excess)}};
    if (r.ssr == Ssr::Z2) {
        Json inc = Json::array();
        for (const auto &c : r.f_infinity_increases) {
            inc.push_back({{"source", to_json(c.source)},
                           {"target", to_json(c.target)},
                           {"success_probability", c.success_probability},
                           {"before", extended(c.before)},
                           {"average_after", extended(c.average_after)}});
        }
        out["f_infinity_increases"] = inc;
        out["random_f_infinity_increases"] = r.random_f_infinity_increases;
    }
    return out;
}

inline Json to_json(const RateEvidence &e) {
    return {{"N", e.n}, {"M", e.m}, {"fidelity", e.fidelity}, {"shift_used", e.shift_used}, {"variance_reduced", e.variance_reduced}};
}

inline Json to_json(const RateResult &r) {
    Json out{{"rate", extended(r.rate)}, {"reversible", r.reversible}, {"regime", std::string(to_string(r.regime))}};
    if (r.evidence) out["evidence"] = to_json(*r.evidence);
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

inline Json to_json(const std::vector<Branch> &branches) {
    Json out = Json::array();
    for (const auto &b : branches) {
        Json o{{"probability", b.probability}, {"state", to_json(b.state)}};
        if (b.outcome >= 0) o["outcome"] = b.outcome;
        out.push_back(o);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Density matrices: {"ssr": "su2", "js": ["0", "1/2"], "rho": [[re | [re, im], ...], ...]}.
// Z2 uses the parity basis, U1 the number basis 0..d-1 (or explicit "labels").

struct DensityInput {
    Basis basis;
    Matrix rho;
};

inline DensityInput density_from_json(const Json &j, std::optional<Ssr> ssr = std::nullopt) {
    if (!j.is_object() || !j.contains("rho")) throw Error(ErrorKind::ParseError, "density input needs \"rho\"");
    if (j.contains("ssr")) ssr = parse_ssr(j.at("ssr").get<std::string>());
    if (!ssr) throw Error(ErrorKind::ParseError, "density input needs a superselection rule");
    const Json &rows = j.at("rho");
    if (!rows.is_array() || rows.empty()) throw Error(ErrorKind::NotDensityMatrix, "rho must be a nonempty matrix");
    const auto d = static_cast<Eigen::Index>(rows.size());
    DensityInput in;
    in.rho = Matrix::Zero(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        const Json &row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
            throw Error(ErrorKind::NotDensityMatrix, "rho must be square");
        }
        for (Eigen::Index c = 0; c < d; ++c) in.rho(r, c) = amplitude(row[static_cast<std::size_t>(c)], "rho entry");
    }
    switch (*ssr) {
        case Ssr::Z2: in.basis = parity_basis(); break;
        case Ssr::U1:
            if (j.contains("labels")) {
                in.basis = Basis{Ssr::U1, j.at("labels").get<std::vector<int>>(), {}};
            } else {
                in.basis = number_basis(static_cast<int>(d) - 1);
            }
            break;
        case Ssr::SU2: {
            if (!j.contains("js")) throw Error(ErrorKind::ParseError, "SU2 density input needs \"js\"");
            std::vector<int> twice;
            for (const auto &v : j.at("js")) {
                try {
                    twice.push_back(HalfInt::parse(v.is_string() ? v.get<std::string>() : v.dump()).twice);
                } catch (const std::invalid_argument &e) {
                    throw Error(ErrorKind::ParseError, e.what());
                }
            }
            in.basis = angular_basis(twice);
            break;
        }
    }
    return in;
}

inline Json to_json(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

inline Json to_json(const Basis &b) {
    Json out{{"ssr", std::string(to_string(b.ssr))}};
    if (b.ssr == Ssr::SU2) {
        Json vecs = Json::array();
        for (std::size_t i = 0; i < b.dim(); ++i) {
            vecs.push_back({HalfInt::from_twice(b.labels[i]).str(), HalfInt::from_twice(b.twice_m[i]).str()});
        }
        out["jm"] = vecs;
    } else {
        out["labels"] = b.labels;
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV.

inline std::string csv_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    // Shortest text that reads back to the same double.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline constexpr const char *kRateCsvHeader = "source_id,target_id,rate,reversible,N,M,fidelity";

inline std::string rate_csv_row(const std::string &source_id, const std::string &target_id, const RateResult &r,
                                const RateEvidence &e) {
    std::ostringstream os;
    os << source_id << ',' << target_id << ',' << csv_number(r.rate.value) << ',' << (r.reversible ? "true" : "false")
       << ',' << e.n << ',' << e.m << ',' << csv_number(e.fidelity);
    return os.str();
}

inline std::string weights_csv(const WeightState &s) {
    std::ostringstream os;
    os << "label,weight\n";
    for (const auto &[l, p] : s.weights()) os << l << ',' << csv_number(p) << '\n';
    return os.str();
}

}  // namespace frameness::io
