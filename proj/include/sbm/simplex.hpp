#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace sbm {

// Dense bounded-variable primal simplex, two phases with artificials.
// Minimizes obj over lower <= v <= upper subject to the rows.  Suited to
// the moderate LPs here (master relaxations over a working cut set, dual
// separation subproblems, full arc-formulation cross-checks).

constexpr double kLpInf = std::numeric_limits<double>::infinity();

struct LpRow {
    std::vector<std::pair<int, double>> terms;   // (variable, coefficient)
    char sense = 'L';                            // 'L' <=, 'G' >=, 'E' ==
    double rhs = 0.0;
};

struct LpProblem {
    int num_vars = 0;
    std::vector<double> obj, lower, upper;
    std::vector<LpRow> rows;

    int add_var(double lo, double up, double cost) {
        lower.push_back(lo);
        upper.push_back(up);
        obj.push_back(cost);
        return num_vars++;
    }
    void add_row(std::vector<std::pair<int, double>> terms, char sense, double rhs) {
        rows.push_back({std::move(terms), sense, rhs});
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpSolution {
    LpStatus status = LpStatus::IterLimit;
    double objective = 0.0;
    std::vector<double> x;   // primal values, size num_vars
};

struct SimplexOptions {
    double tol_cost = 1e-9;    // reduced-cost optimality tolerance
    double tol_pivot = 1e-10;  // minimum usable pivot magnitude
    double tol_feas = 1e-9;    // phase-1 residual tolerance (scaled by rhs norm)
    long long max_iters = -1;  // default derived from problem size
};

LpSolution solve_lp(const LpProblem& p, const SimplexOptions& opt = {});

} // namespace sbm
