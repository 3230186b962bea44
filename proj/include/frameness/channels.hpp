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

// G-invariant Kraus channels.
//
// Invariant channels on standard-form states are built from operators
// K = S * D, with D diagonal in the charge basis and S a rigid shift of the
// charge label (a parity flip for Z2, a number translation for U1, a
// downward j translation for SU2). General SU2-invariant operations are
// spherical tensors whose matrix elements are fixed by a reduced matrix
// element f(j', j) and a 3j symbol; the diagonal SU2 form is their
// restriction to stretched states.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frameness/error.hpp"
#include "frameness/half_int.hpp"
#include "frameness/states.hpp"
#include "frameness/wigner.hpp"

namespace frameness {

using Complex = std::complex<double>;
using Profile = std::map<int, Complex>;

/// K = S_shift * diag(profile). Shift and labels use the state's label units
/// (twice j for SU2, where the shift is -2J <= 0). Operators that share a
/// nonnegative `outcome` tag are reported as one measurement branch.
struct DiagonalKraus {
    int shift = 0;
    Profile profile;
    int outcome = -1;
};

struct KrausChannel {
    Ssr ssr = Ssr::U1;
    std::vector<DiagonalKraus> ops;
    bool trace_preserving = false;
    /// Truncated basis on which completeness was checked.
    std::vector<int> domain;
};

/// Image of `label` under a shift, or nullopt where S annihilates it.
inline std::optional<int> shifted_label(Ssr ssr, int label, int shift) {
    if (ssr == Ssr::Z2) return label ^ (shift & 1);
    int target = label + shift;
    if (target < 0) return std::nullopt;
    return target;
}

inline KrausChannel build_diagonal_channel(Ssr ssr, std::vector<DiagonalKraus> ops) {
    const double tol = tolerance();
    std::set<int> domain;
    if (ssr == Ssr::Z2) domain = {0, 1};
    for (const auto &op : ops) {
        if (ssr == Ssr::Z2 && op.shift != 0 && op.shift != 1) {
            throw Error(ErrorKind::IllegalShift, "Z2 shifts are bits");
        }
        if (ssr == Ssr::SU2 && op.shift > 0) {
            throw Error(ErrorKind::IllegalShift, "j can only be shifted downward by an SU2-invariant operation");
        }
        for (const auto &[label, c] : op.profile) {
            if (label < 0 || (ssr == Ssr::Z2 && label > 1)) {
                throw Error(ErrorKind::ParseError, "profile label " + std::to_string(label) + " is outside the charge basis");
            }
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw Error(ErrorKind::ParseError, "profile entries must be finite");
            }
            domain.insert(label);
        }
    }
    bool tp = true;
    for (int label : domain) {
        double total = 0.0;
        for (const auto &op : ops) {
            auto it = op.profile.find(label);
            if (it == op.profile.end() || !shifted_label(ssr, label, op.shift)) continue;
            total += std::norm(it->second);
        }
        if (total > 1.0 + tol) {
            throw Error(ErrorKind::CompletenessViolated,
                        "sum of |c|^2 at label " + std::to_string(label) + " is " + std::to_string(total));
        }
        if (std::abs(total - 1.0) > tol) tp = false;
    }
    KrausChannel ch;
    ch.ssr = ssr;
    ch.ops = std::move(ops);
    ch.trace_preserving = tp && !domain.empty();
    ch.domain.assign(domain.begin(), domain.end());
    return ch;
}

inline KrausChannel identity_channel(Ssr ssr, const std::vector<int> &labels) {
    DiagonalKraus op;
    for (int l : labels) op.profile[l] = 1.0;
    return build_diagonal_channel(ssr, {op});
}

struct Branch {
    double probability = 0.0;
    WeightState state;
    int outcome = -1;
};

/// Branch ensemble produced by measuring the channel on a standard-form
/// state. Each Kraus operator maps a pure state to a pure state; operators
/// grouped under one outcome must agree on that state (else MixedOutput).
inline std::vector<Branch> apply(const KrausChannel &ch, const WeightState &s) {
    if (ch.ssr != s.ssr()) {
        throw Error(ErrorKind::SsrMismatch, "channel and state use different superselection rules");
    }
    struct Partial {
        int outcome;
        std::vector<std::pair<double, WeightMap>> parts;
    };
    std::vector<Partial> groups;
    for (std::size_t i = 0; i < ch.ops.size(); ++i) {
        const auto &op = ch.ops[i];
        WeightMap out;
        double w = 0.0;
        for (const auto &[label, p] : s.weights()) {
            auto it = op.profile.find(label);
            if (it == op.profile.end()) continue;
            auto target = shifted_label(ch.ssr, label, op.shift);
            if (!target) continue;
            double amp2 = std::norm(it->second) * p;
            if (amp2 == 0.0) continue;
            out[*target] += amp2;
            w += amp2;
        }
        const int key = op.outcome >= 0 ? op.outcome : -static_cast<int>(i) - 1;
        auto git = std::find_if(groups.begin(), groups.end(), [&](const Partial &g) { return g.outcome == key; });
        if (git == groups.end()) {
            groups.push_back(Partial{key, {}});
            git = groups.end() - 1;
        }
        if (w > 1e-12) git->parts.emplace_back(w, std::move(out));
    }

    std::vector<Branch> branches;
    for (auto &g : groups) {
        if (g.parts.empty()) continue;
        double total = 0.0;
        WeightMap merged;
        for (auto &[w, m] : g.parts) {
            total += w;
            for (auto &[l, v] : m) merged[l] += v;
        }
        // Every part must be proportional to the merged state.
        for (auto &[w, m] : g.parts) {
            std::set<int> labels;
            for (auto &kv : m) labels.insert(kv.first);
            for (auto &kv : merged) labels.insert(kv.first);
            for (int l : labels) {
                double a = m.count(l) ? m.at(l) / w : 0.0;
                double b = merged.count(l) ? merged.at(l) / total : 0.0;
                if (std::abs(a - b) > 1e-8) {
                    throw Error(ErrorKind::MixedOutput, "operators grouped under outcome " + std::to_string(g.outcome) +
                                                            " produce different states");
                }
            }
        }
        Branch b;
        b.probability = total;
        b.state = renormalized(ch.ssr, std::move(merged), s.axis());
        b.outcome = g.outcome;
        branches.push_back(std::move(b));
    }
    return branches;
}

// ---------------------------------------------------------------------------
// Dense representation on a truncated basis.

/// Ordered basis of the truncated Hilbert space. For Z2 and U1 every vector
/// carries a charge label; for SU2 it carries (2j, 2m) and multiplets are
/// complete.
struct Basis {
    Ssr ssr = Ssr::U1;
    std::vector<int> labels;
    std::vector<int> twice_m;

    std::size_t dim() const { return labels.size(); }

    std::optional<std::size_t> index_of(int label, int tm = 0) const {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == label && (twice_m.empty() || twice_m[i] == tm)) return i;
        }
        return std::nullopt;
    }
};

inline Basis parity_basis() { return Basis{Ssr::Z2, {0, 1}, {}}; }

inline Basis number_basis(int max_n) {
    Basis b{Ssr::U1, {}, {}};
    for (int n = 0; n <= max_n; ++n) b.labels.push_back(n);
    return b;
}

/// All |j, m> for the given 2j values (deduplicated, ascending), m descending.
inline Basis angular_basis(std::vector<int> twice_js) {
    std::sort(twice_js.begin(), twice_js.end());
    twice_js.erase(std::unique(twice_js.begin(), twice_js.end()), twice_js.end());
    Basis b{Ssr::SU2, {}, {}};
    for (int tj : twice_js) {
        if (tj < 0) throw Error(ErrorKind::ParseError, "negative angular momentum");
        for (int tm = tj; tm >= -tj; tm -= 2) {
            b.labels.push_back(tj);
            b.twice_m.push_back(tm);
        }
    }
    return b;
}

using Matrix = Eigen::MatrixXcd;

struct AngularMomentum {
    Matrix jz, jplus, jminus;
};

inline AngularMomentum angular_momentum(const Basis &b) {
    const auto d = static_cast<Eigen::Index>(b.dim());
    AngularMomentum a{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
    for (std::size_t i = 0; i < b.dim(); ++i) {
        const double j = 0.5 * b.labels[i], m = 0.5 * b.twice_m[i];
        a.jz(i, i) = m;
        if (auto up = b.index_of(b.labels[i], b.twice_m[i] + 2)) {
            a.jplus(*up, i) = std::sqrt(j * (j + 1) - m * (m + 1));
        }
        if (auto down = b.index_of(b.labels[i], b.twice_m[i] - 2)) {
            a.jminus(*down, i) = std::sqrt(j * (j + 1) - m * (m - 1));
        }
    }
    return a;
}

/// Unitary of the rotation exp(-i a Jz) exp(-i b Jy) exp(-i c Jz).
inline Matrix rotation(const Basis &b, double alpha, double beta, double gamma) {
    const auto d = static_cast<Eigen::Index>(b.dim());
    auto am = angular_momentum(b);
    Matrix jy = (am.jplus - am.jminus) / Complex(0.0, 2.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(jy);
    Eigen::VectorXcd phases(d);
    for (Eigen::Index i = 0; i < d; ++i) phases(i) = std::exp(Complex(0.0, -beta * es.eigenvalues()(i)));
    Matrix ry = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::VectorXcd za(d), zc(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double m = 0.5 * b.twice_m[i];
        za(i) = std::exp(Complex(0.0, -alpha * m));
        zc(i) = std::exp(Complex(0.0, -gamma * m));
    }
    return za.asDiagonal() * ry * zc.asDiagonal();
}

// ---------------------------------------------------------------------------
// Spherical tensor Kraus operators.

using ReducedElements = std::map<std::pair<int, int>, Complex>;  // (2j', 2j) -> f

struct SphericalTensorKraus {
    HalfInt rank;
    int alpha = 0;
    ReducedElements f;
    HalfInt jmax;
    Basis basis;
    /// K_{J,M} for M = -J, ..., J (index M + J).
    std::vector<Matrix> components;

    const Matrix &component(HalfInt m) const { return components.at(static_cast<std::size_t>((m.twice + rank.twice) / 2)); }
};

inline bool triangle_allows(int twice_jp, int twice_rank, int twice_j) {
    if ((twice_jp + twice_rank + twice_j) % 2 != 0) return false;
    return twice_j >= std::abs(twice_rank - twice_jp) && twice_j <= twice_rank + twice_jp;
}

/// <j', m | K_{J,M} | j, m - M> = (-1)^(j'-m) (j' J j; -m M m-M) f(j', j),
/// materialized on `basis` (which must contain complete multiplets).
inline std::vector<Matrix> tensor_components(HalfInt rank, const ReducedElements &f, const Basis &basis) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    std::vector<Matrix> comps;
    for (int tM = -rank.twice; tM <= rank.twice; tM += 2) {
        Matrix k = Matrix::Zero(d, d);
        for (std::size_t out = 0; out < basis.dim(); ++out) {
            const int tjp = basis.labels[out], tm = basis.twice_m[out];
            for (std::size_t in = 0; in < basis.dim(); ++in) {
                const int tj = basis.labels[in], tm_in = basis.twice_m[in];
                if (tm_in != tm - tM) continue;
                auto it = f.find({tjp, tj});
                if (it == f.end() || it->second == Complex(0.0)) continue;
                double tj3 = wigner::three_j(HalfInt::from_twice(tjp), rank, HalfInt::from_twice(tj),
                                             HalfInt::from_twice(-tm), HalfInt::from_twice(tM), HalfInt::from_twice(tm_in));
                if (tj3 == 0.0) continue;
                const int phase = (tjp - tm) / 2;
                const double sign = (phase % 2 == 0) ? 1.0 : -1.0;
                k(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)) = sign * tj3 * it->second;
            }
        }
        comps.push_back(std::move(k));
    }
    return comps;
}

inline std::vector<int> active_js(const ReducedElements &f) {
    std::set<int> js;
    for (const auto &[key, v] : f) {
        if (v == Complex(0.0)) continue;
        js.insert(key.first);
        js.insert(key.second);
    }
    return {js.begin(), js.end()};
}

/// Validates the reduced elements and materializes the 2J+1 operators on the
/// multiplets that f touches.
inline SphericalTensorKraus build_spherical_tensor(HalfInt rank, ReducedElements f, HalfInt jmax, int alpha = 0) {
    if (rank.twice < 0 || jmax.twice < 0) throw Error(ErrorKind::TriangleViolation, "negative rank or cutoff");
    for (const auto &[key, v] : f) {
        if (v == Complex(0.0)) continue;
        const auto [tjp, tj] = key;
        if (tjp < 0 || tj < 0 || tjp > jmax.twice || tj > jmax.twice) {
            throw Error(ErrorKind::TriangleViolation, "reduced element outside the j <= jmax window");
        }
        if (!triangle_allows(tjp, rank.twice, tj)) {
            throw Error(ErrorKind::TriangleViolation, "f(" + HalfInt::from_twice(tjp).str() + ", " +
                                                          HalfInt::from_twice(tj).str() +
                                                          ") is nonzero outside |J - j'| <= j <= J + j'");
        }
    }
    SphericalTensorKraus t;
    t.rank = rank;
    t.alpha = alpha;
    t.f = std::move(f);
    t.jmax = jmax;
    t.basis = angular_basis(active_js(t.f));
    t.components = tensor_components(rank, t.f, t.basis);
    return t;
}

/// Largest entry of [Jz, K_M] - M K_M and [J+-, K_M] - sqrt(J(J+1) - M(M+-1)) K_{M+-1}.
inline double verify_covariance(const SphericalTensorKraus &t) {
    auto am = angular_momentum(t.basis);
    const double big_j = t.rank.value();
    const auto d = static_cast<Eigen::Index>(t.basis.dim());
    const Matrix zero = Matrix::Zero(d, d);
    double worst = 0.0;
    auto max_abs = [](const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); };
    for (int tM = -t.rank.twice; tM <= t.rank.twice; tM += 2) {
        const double m = 0.5 * tM;
        const Matrix &k = t.component(HalfInt::from_twice(tM));
        const Matrix &up = tM + 2 <= t.rank.twice ? t.component(HalfInt::from_twice(tM + 2)) : zero;
        const Matrix &down = tM - 2 >= -t.rank.twice ? t.component(HalfInt::from_twice(tM - 2)) : zero;
        worst = std::max(worst, max_abs(am.jz * k - k * am.jz - m * k));
        worst = std::max(worst, max_abs(am.jplus * k - k * am.jplus - std::sqrt(big_j * (big_j + 1) - m * (m + 1)) * up));
        worst = std::max(worst, max_abs(am.jminus * k - k * am.jminus - std::sqrt(big_j * (big_j + 1) - m * (m - 1)) * down));
    }
    return worst;
}

/// The full spherical-tensor operators whose restriction to stretched states
/// is a diagonal SU2 operator: f(j - J, j) = c_j / (j-J J j; -(j-J) -J j).
inline SphericalTensorKraus lift_to_tensor(const DiagonalKraus &op, int alpha = 0) {
    const int trank = -op.shift;
    ReducedElements f;
    int top = 0;
    for (const auto &[tj, c] : op.profile) {
        const int tjp = tj - trank;
        top = std::max(top, tj);
        if (tjp < 0 || c == Complex(0.0)) continue;
        double stretched = wigner::three_j(HalfInt::from_twice(tjp), HalfInt::from_twice(trank), HalfInt::from_twice(tj),
                                           HalfInt::from_twice(-tjp), HalfInt::from_twice(-trank), HalfInt::from_twice(tj));
        f[{tjp, tj}] = c / stretched;
    }
    return build_spherical_tensor(HalfInt::from_twice(trank), std::move(f), HalfInt::from_twice(top), alpha);
}

/// Dense Kraus matrices of a diagonal channel on `basis`.
inline std::vector<Matrix> kraus_matrices(const KrausChannel &ch, const Basis &basis) {
    std::vector<Matrix> out;
    const auto d = static_cast<Eigen::Index>(basis.dim());
    if (ch.ssr == Ssr::SU2) {
        for (std::size_t i = 0; i < ch.ops.size(); ++i) {
            auto t = lift_to_tensor(ch.ops[i], static_cast<int>(i));
            for (auto &m : tensor_components(t.rank, t.f, basis)) out.push_back(std::move(m));
        }
        return out;
    }
    for (const auto &op : ch.ops) {
        Matrix k = Matrix::Zero(d, d);
        for (const auto &[label, c] : op.profile) {
            auto target = shifted_label(ch.ssr, label, op.shift);
            if (!target) continue;
            auto in = basis.index_of(label);
            auto to = basis.index_of(*target);
            if (!in || !to) throw Error(ErrorKind::WindowExceeded, "basis does not cover the channel");
            k(static_cast<Eigen::Index>(*to), static_cast<Eigen::Index>(*in)) = c;
        }
        out.push_back(std::move(k));
    }
    return out;
}

/// Smallest basis on which the channel acts.
inline Basis channel_basis(const KrausChannel &ch) {
    std::set<int> labels;
    for (const auto &op : ch.ops) {
        for (const auto &[label, c] : op.profile) {
            labels.insert(label);
            if (auto t = shifted_label(ch.ssr, label, op.shift)) labels.insert(*t);
        }
    }
    if (ch.ssr == Ssr::Z2) return parity_basis();
    if (ch.ssr == Ssr::U1) return number_basis(labels.empty() ? 0 : *labels.rbegin());
    return angular_basis({labels.begin(), labels.end()});
}

inline Matrix choi(const std::vector<Matrix> &kraus) {
    if (kraus.empty()) return Matrix();
    const auto d = kraus.front().rows();
    Matrix vecs(d * d, static_cast<Eigen::Index>(kraus.size()));
    for (std::size_t i = 0; i < kraus.size(); ++i) {
        vecs.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXcd>(kraus[i].data(), d * d);
    }
    return vecs * vecs.adjoint();
}

/// Unitary representation of a group element: Z2 element index, U1 angle or
/// SU2 Euler angles.
inline Matrix group_action(const Basis &basis, const std::vector<double> &g) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    if (basis.ssr == Ssr::SU2) return rotation(basis, g.at(0), g.at(1), g.at(2));
    Eigen::VectorXcd diag(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const int label = basis.labels[static_cast<std::size_t>(i)];
        if (basis.ssr == Ssr::Z2) {
            diag(i) = (g.at(0) != 0.0 && label % 2 == 1) ? -1.0 : 1.0;
        } else {
            diag(i) = std::exp(Complex(0.0, g.at(0) * label));
        }
    }
    return diag.asDiagonal();
}

struct InvarianceCheck {
    bool invariant = false;
    double max_deviation = 0.0;
};

inline constexpr int kDefaultHaarSamples = 200;
inline constexpr std::uint64_t kDefaultSeed = 20260415;

/// Compares Choi matrices of T(g) o E o T(g)^-1 and E: both Z2 elements, or
/// `samples` uniform U1 phases, or `samples` Haar-random rotations.
inline InvarianceCheck is_invariant_kraus(const Basis &basis, const std::vector<Matrix> &kraus,
                                          int samples = kDefaultHaarSamples, std::uint64_t seed = kDefaultSeed) {
    InvarianceCheck out;
    if (kraus.empty()) {
        out.invariant = true;
        return out;
    }
    const Matrix reference = choi(kraus);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> elements;
    if (basis.ssr == Ssr::Z2) {
        elements = {{0.0}, {1.0}};
    } else {
        for (int s = 0; s < samples; ++s) {
            if (basis.ssr == Ssr::U1) {
                elements.push_back({2.0 * std::numbers::pi * unit(rng)});
            } else {
                double a = 2.0 * std::numbers::pi * unit(rng);
                double b = std::acos(1.0 - 2.0 * unit(rng));
                double c = 2.0 * std::numbers::pi * unit(rng);
                elements.push_back({a, b, c});
            }
        }
    }
    for (const auto &g : elements) {
        Matrix u = group_action(basis, g);
        std::vector<Matrix> conj;
        conj.reserve(kraus.size());
        for (const auto &k : kraus) conj.push_back(u * k * u.adjoint());
        out.max_deviation = std::max(out.max_deviation, (choi(conj) - reference).cwiseAbs().maxCoeff());
    }
    out.invariant = out.max_deviation < 1e-8;
    return out;
}

inline InvarianceCheck is_invariant_channel(const KrausChannel &ch, int samples = kDefaultHaarSamples,
                                            std::uint64_t seed = kDefaultSeed) {
    Basis basis = channel_basis(ch);
    return is_invariant_kraus(basis, kraus_matrices(ch, basis), samples, seed);
}

inline InvarianceCheck is_invariant_channel(const std::vector<SphericalTensorKraus> &tensors,
                                            int samples = kDefaultHaarSamples, std::uint64_t seed = kDefaultSeed) {
    std::vector<int> js;
    for (const auto &t : tensors) {
        auto a = active_js(t.f);
        js.insert(js.end(), a.begin(), a.end());
    }
    Basis basis = angular_basis(js);
    std::vector<Matrix> kraus;
    for (const auto &t : tensors) {
        for (auto &m : tensor_components(t.rank, t.f, basis)) kraus.push_back(std::move(m));
    }
    return is_invariant_kraus(basis, kraus, samples, seed);
}

// ---------------------------------------------------------------------------
// Density matrices.

inline void require_density_matrix(const Matrix &rho, const Basis &basis) {
    const double tol = tolerance();
    if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != basis.dim()) {
        throw Error(ErrorKind::NotDensityMatrix, "matrix shape does not match the basis");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw Error(ErrorKind::NotDensityMatrix, "matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0)) > tol) {
        throw Error(ErrorKind::NotDensityMatrix, "trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    if (es.eigenvalues().minCoeff() < -tol) {
        throw Error(ErrorKind::NotDensityMatrix, "matrix is not positive semidefinite");
    }
}

/// Exact group average of a density matrix.
inline Matrix twirl(const Matrix &rho, const Basis &basis) {
    require_density_matrix(rho, basis);
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Matrix out = Matrix::Zero(d, d);
    if (basis.ssr == Ssr::SU2) {
        std::map<int, double> pj;
        for (Eigen::Index i = 0; i < d; ++i) pj[basis.labels[static_cast<std::size_t>(i)]] += rho(i, i).real();
        for (Eigen::Index i = 0; i < d; ++i) {
            const int tj = basis.labels[static_cast<std::size_t>(i)];
            out(i, i) = pj[tj] / (tj + 1);
        }
        return out;
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            int a = basis.labels[static_cast<std::size_t>(i)], b = basis.labels[static_cast<std::size_t>(k)];
            bool same = basis.ssr == Ssr::Z2 ? (a % 2 == b % 2) : (a == b);
            if (same) out(i, k) = rho(i, k);
        }
    }
    return out;
}

/// sum_j sqrt(p_j) |j, j> as a vector on an SU2 basis.
inline Eigen::VectorXcd stretched_vector(const WeightState &s, const Basis &basis) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
    for (const auto &[tj, p] : s.weights()) {
        auto i = basis.index_of(tj, tj);
        if (!i) throw Error(ErrorKind::WindowExceeded, "basis does not contain |j, j> for 2j = " + std::to_string(tj));
        v(static_cast<Eigen::Index>(*i)) = std::sqrt(p);
    }
    return v;
}

/// Unnormalized output sum_K K |psi><psi| K^dagger.
inline Matrix apply_kraus(const std::vector<Matrix> &kraus, const Eigen::VectorXcd &psi) {
    Matrix rho = Matrix::Zero(psi.size(), psi.size());
    for (const auto &k : kraus) {
        Eigen::VectorXcd out = k * psi;
        rho += out * out.adjoint();
    }
    return rho;
}

inline double purity(const Matrix &rho) {
    const double tr = rho.trace().real();
    return (rho * rho).trace().real() / (tr * tr);
}

/// Fraction of the (normalized) weight of rho on stretched states |j, j>.
inline double stretched_weight(const Matrix &rho, const Basis &basis) {
    double on = 0.0;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        if (basis.labels[i] == basis.twice_m[i]) on += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    return on / rho.trace().real();
}

}  // namespace frameness
