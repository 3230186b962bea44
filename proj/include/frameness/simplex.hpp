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

// Small dense two-phase simplex solver with Bland's anti-cycling rule.
//
// The conversion problems here have at most a few hundred variables and
// constraints, so a full tableau is simpler and fast enough. Pivoting is
// deterministic, which keeps certificates reproducible.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace frameness::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

/// maximize objective . x  subject to rows, x >= 0.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<Constraint> rows;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    /// Sum of artificial variables left after phase one (0 when feasible).
    double infeasibility = 0.0;
};

namespace detail {

class Tableau {
   public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

    double &at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double &rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    // Row `rows_` is the objective row.
    std::size_t obj() const { return rows_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

   private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

inline constexpr double kPivotEps = 1e-12;

// Runs Bland-rule iterations on the objective row. Returns false if unbounded.
inline bool optimize(Tableau &t, std::vector<std::size_t> &basis, const std::vector<bool> &allowed) {
    for (std::size_t iter = 0; iter < 100000; ++iter) {
        std::size_t enter = t.cols();
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (allowed[c] && t.at(t.obj(), c) < -kPivotEps) {
                enter = c;
                break;
            }
        }
        if (enter == t.cols()) return true;
        std::size_t leave = t.rows();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double a = t.at(r, enter);
            if (a <= kPivotEps) continue;
            const double ratio = t.rhs(r) / a;
            if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && leave < t.rows() && basis[r] < basis[leave])) {
                best = ratio;
                leave = r;
            }
        }
        if (leave == t.rows()) return false;
        t.pivot(leave, enter);
        basis[leave] = enter;
    }
    throw std::runtime_error("simplex iteration limit reached");
}

}  // namespace detail

inline Solution solve(const Problem &problem, double feasibility_tol = 1e-9) {
    const std::size_t n = problem.num_vars;
    const std::size_t m = problem.rows.size();

    // Normalise to nonnegative right-hand sides.
    std::vector<Constraint> rows = problem.rows;
    for (auto &row : rows) {
        if (row.coeffs.size() != n) throw std::invalid_argument("constraint width does not match num_vars");
        if (row.rhs < 0) {
            for (double &a : row.coeffs) a = -a;
            row.rhs = -row.rhs;
            if (row.relation == Relation::LessEqual) {
                row.relation = Relation::GreaterEqual;
            } else if (row.relation == Relation::GreaterEqual) {
                row.relation = Relation::LessEqual;
            }
        }
    }

    std::size_t num_slack = 0, num_art = 0;
    for (const auto &row : rows) {
        if (row.relation != Relation::Equal) ++num_slack;
        if (row.relation != Relation::LessEqual) ++num_art;
    }
    const std::size_t cols = n + num_slack + num_art;
    detail::Tableau t(m, cols);
    std::vector<std::size_t> basis(m);
    std::vector<bool> is_art(cols, false);

    std::size_t next_slack = n, next_art = n + num_slack;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) t.at(r, c) = rows[r].coeffs[c];
        t.rhs(r) = rows[r].rhs;
        switch (rows[r].relation) {
            case Relation::LessEqual:
                t.at(r, next_slack) = 1.0;
                basis[r] = next_slack++;
                break;
            case Relation::GreaterEqual:
                t.at(r, next_slack++) = -1.0;
                t.at(r, next_art) = 1.0;
                is_art[next_art] = true;
                basis[r] = next_art++;
                break;
            case Relation::Equal:
                t.at(r, next_art) = 1.0;
                is_art[next_art] = true;
                basis[r] = next_art++;
                break;
        }
    }

    Solution sol;
    std::vector<bool> allowed(cols, true);

    if (num_art > 0) {
        // Phase one: maximise -(sum of artificials).
        for (std::size_t c = 0; c < cols; ++c) t.at(t.obj(), c) = is_art[c] ? 1.0 : 0.0;
        t.rhs(t.obj()) = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            if (!is_art[basis[r]]) continue;
            for (std::size_t c = 0; c <= cols; ++c) t.at(t.obj(), c) -= t.at(r, c);
        }
        detail::optimize(t, basis, allowed);
        sol.infeasibility = -t.rhs(t.obj());
        if (sol.infeasibility > feasibility_tol) {
            sol.status = Status::Infeasible;
            return sol;
        }
        // Drive remaining artificials out of the basis where possible.
        for (std::size_t r = 0; r < m; ++r) {
            if (!is_art[basis[r]]) continue;
            for (std::size_t c = 0; c < cols; ++c) {
                if (!is_art[c] && std::abs(t.at(r, c)) > 1e-9) {
                    t.pivot(r, c);
                    basis[r] = c;
                    break;
                }
            }
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (is_art[c]) allowed[c] = false;
        }
    }

    // Phase two.
    for (std::size_t c = 0; c <= cols; ++c) t.at(t.obj(), c) = 0.0;
    std::vector<double> objective = problem.objective;
    objective.resize(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) t.at(t.obj(), c) = -objective[c];
    for (std::size_t r = 0; r < m; ++r) {
        const double f = t.at(t.obj(), basis[r]);
        if (f == 0.0) continue;
        for (std::size_t c = 0; c <= cols; ++c) t.at(t.obj(), c) -= f * t.at(r, c);
    }
    if (!detail::optimize(t, basis, allowed)) {
        sol.status = Status::Unbounded;
        return sol;
    }
    sol.status = Status::Optimal;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) sol.x[basis[r]] = std::max(0.0, t.rhs(r));
    }
    sol.objective = 0.0;
    for (std::size_t c = 0; c < n; ++c) sol.objective += objective[c] * sol.x[c];
    return sol;
}

}  // namespace frameness::lp
