// Two-phase dense simplex for equality-constrained LPs in standard form:
// minimize c'x subject to Ax = b, x >= 0. Bland's rule (smallest eligible
// index entering, smallest basic index on ratio ties) throughout, so no
// cycling. Full-tableau arithmetic; sized for desk-scale problems.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/matrix.hpp"
#include "sparsedecomp/vector.hpp"

namespace sparsedecomp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

struct LpProblem {
    Vector cost;
    Matrix constraints;
    Vector rhs;

    LpProblem(Vector cost_in, Matrix constraints_in, Vector rhs_in)
        : cost(std::move(cost_in)),
          constraints(std::move(constraints_in)),
          rhs(std::move(rhs_in)) {
        if (constraints.cols() != cost.size() || constraints.rows() != rhs.size())
            throw DimensionMismatch("LpProblem: inconsistent dimensions");
    }
};

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    Vector x;  // length = #variables; meaningful when Optimal
    double objective = 0.0;
    int iterations = 0;
    std::vector<int> basis;
    std::vector<double> reduced_costs;  // against the original cost vector
};

namespace detail {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasibilityTol = 1e-9;

struct Tableau {
    std::vector<std::vector<double>> rows;  // m x (ncols + 1), last col = rhs
    std::vector<int> basis;                 // basic variable per row
    int ncols = 0;

    void pivot(int r, int s) {
        auto& prow = rows[r];
        const double pv = prow[s];
        for (double& x : prow) x /= pv;
        prow[s] = 1.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<int>(i) == r) continue;
            const double factor = rows[i][s];
            if (factor == 0.0) continue;
            for (int j = 0; j <= ncols; ++j) rows[i][j] -= factor * prow[j];
            rows[i][s] = 0.0;
        }
        basis[r] = s;
    }

    double reduced_cost(const std::vector<double>& cost, int j) const {
        double rc = cost[j];
        for (std::size_t i = 0; i < rows.size(); ++i) rc -= cost[basis[i]] * rows[i][j];
        return rc;
    }

    double objective(const std::vector<double>& cost) const {
        double z = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) z += cost[basis[i]] * rows[i][ncols];
        return z;
    }
};

// One simplex phase; `eligible_cols` limits which columns may enter.
// Returns Optimal / Unbounded / IterationLimit.
inline LpStatus run_phase(Tableau& t, const std::vector<double>& cost, int eligible_cols,
                          int max_iters, int& iterations) {
    for (;;) {
        int entering = -1;
        for (int j = 0; j < eligible_cols; ++j) {
            bool basic = false;
            for (int b : t.basis)
                if (b == j) { basic = true; break; }
            if (basic) continue;
            if (t.reduced_cost(cost, j) < -kReducedCostTol) {
                entering = j;  // Bland: smallest index wins
                break;
            }
        }
        if (entering < 0) return LpStatus::Optimal;

        int leaving = -1;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const double coeff = t.rows[i][entering];
            if (coeff <= kPivotTol) continue;
            const double ratio = t.rows[i][t.ncols] / coeff;
            if (leaving < 0 || ratio < best_ratio - 1e-12 ||
                (ratio <= best_ratio + 1e-12 && t.basis[i] < t.basis[leaving])) {
                leaving = static_cast<int>(i);
                best_ratio = ratio;
            }
        }
        if (leaving < 0) return LpStatus::Unbounded;

        t.pivot(leaving, entering);
        if (++iterations >= max_iters) return LpStatus::IterationLimit;
    }
}

}  // namespace detail

inline LpSolution simplex_solve(const LpProblem& lp, int max_iters = 10000) {
    const int m = static_cast<int>(lp.rhs.size());
    const int nv = static_cast<int>(lp.cost.size());
    const int ncols = nv + m;  // original variables + one artificial per row

    detail::Tableau t;
    t.ncols = ncols;
    t.rows.assign(m, std::vector<double>(ncols + 1, 0.0));
    t.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        const double sign = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < nv; ++j) t.rows[i][j] = sign * lp.constraints(i, j);
        t.rows[i][nv + i] = 1.0;
        t.rows[i][ncols] = sign * lp.rhs[i];
        t.basis[i] = nv + i;
    }

    LpSolution solution;
    solution.basis.clear();

    // Phase I: drive the artificial variables to zero.
    std::vector<double> phase1_cost(ncols, 0.0);
    for (int j = nv; j < ncols; ++j) phase1_cost[j] = 1.0;
    LpStatus status = detail::run_phase(t, phase1_cost, nv, max_iters, solution.iterations);
    if (status == LpStatus::IterationLimit) {
        solution.status = status;
        return solution;
    }
    if (status == LpStatus::Unbounded)
        throw InternalError("simplex_solve: phase I cannot be unbounded");
    if (t.objective(phase1_cost) > detail::kFeasibilityTol) {
        solution.status = LpStatus::Infeasible;
        return solution;
    }

    // Pivot leftover artificials out of the basis; a row where no
    // original column can pivot is a redundant constraint and is dropped.
    for (int i = static_cast<int>(t.rows.size()) - 1; i >= 0; --i) {
        if (t.basis[i] < nv) continue;
        int col = -1;
        for (int j = 0; j < nv; ++j) {
            if (std::fabs(t.rows[i][j]) > detail::kFeasibilityTol) { col = j; break; }
        }
        if (col >= 0) {
            t.pivot(i, col);
        } else {
            t.rows.erase(t.rows.begin() + i);
            t.basis.erase(t.basis.begin() + i);
        }
    }

    // Phase II with the real costs; artificial columns may not re-enter.
    std::vector<double> phase2_cost(ncols, 0.0);
    for (int j = 0; j < nv; ++j) phase2_cost[j] = lp.cost[j];
    status = detail::run_phase(t, phase2_cost, nv, max_iters, solution.iterations);
    solution.status = status;
    if (status != LpStatus::Optimal) return solution;

    std::vector<double> x(nv, 0.0);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.basis[i] < nv) x[t.basis[i]] = t.rows[i][t.ncols];
    solution.x = Vector(std::move(x));
    double objective = 0.0;
    for (int j = 0; j < nv; ++j) objective += lp.cost[j] * solution.x[j];
    solution.objective = objective;
    solution.basis = t.basis;
    solution.reduced_costs.resize(nv);
    for (int j = 0; j < nv; ++j)
        solution.reduced_costs[j] = t.reduced_cost(phase2_cost, j);
    return solution;
}

}  // namespace sparsedecomp
