#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbm/cuts.hpp"
#include "sbm/graph.hpp"
#include "sbm/rational.hpp"

namespace sbm {

// Solver configurations, ordered from the plain LP-separated decomposition
// to the fully lifted variants:
//   lp     dual subproblems solved as LPs, integer solutions separated
//   i      combinatorial separation, lift N
//   i+     + extended seed sets, greedy start, initial cuts
//   i+s    + scenario sampling (tau = 0.2) for cut generation
//   i+sf   + fractional separation at branch-and-bound nodes
//   i+sfp  fractional separation with lift P
//   i+sfh  fractional separation with lift H and pure-label shortcuts
//   g      greedy heuristic alone
enum class Setting { Lp, I, IPlus, IPlusS, IPlusSF, IPlusSFP, IPlusSFH, Greedy };

const char* setting_name(Setting s);
std::optional<Setting> parse_setting(const std::string& name);

struct SolverSettings {
    Setting setting = Setting::IPlus;
    double tau = -1.0;           // < 0: 0.2 for sampling settings, else 1.0
    double time_limit_s = 3600.0;

    // derived from the setting; set explicitly only for experiments
    std::optional<bool> extended_seeds, greedy_start, initial_cuts,
        fractional_separation, label_closure;
    std::optional<Lift> lift;

    int max_frac_rounds_per_node = 20;
    double int_tol = 1e-6;       // integrality tolerance on x
    double opt_gap = 1e-6;       // relative optimality gap
    double violation_tol = 1e-6;

    std::vector<BendersCut>* cut_log = nullptr;   // records every emitted cut
    std::string trace_path;                       // cut trace file, "" = off
};

struct ResolvedSettings {
    bool lp_separation = false;
    bool extended_seeds = false, greedy_start = false, initial_cuts = false,
         fractional_separation = false, label_closure = false;
    Lift lift = Lift::N;
    double tau = 1.0;
};
ResolvedSettings resolve_settings(const SolverSettings& s);

struct SolveReport {
    std::string instance;        // filled by the caller for reporting
    Setting setting = Setting::IPlus;
    double t_s = 0.0;
    double ub = 0.0, lb = 0.0, gap = 0.0, lb0 = 0.0;
    long long nodes = 0, int_cuts = 0, frac_cuts = 0;
    bool optimal = false;
    bool hit_time_limit = false;
    bool has_bounds = true;      // false for the pure heuristic
    std::vector<int> incumbent;  // blocked labels, sorted
    Rational ub_exact = Rational::integer(0);
    bool has_incumbent = false;
};

// Exact solve (or greedy run for Setting::Greedy).
SolveReport branch_and_benders_cut(const ScenarioGraphs& sg, const SolverSettings& s);

// Iterative blocking: grow the set by the label with the largest marginal
// spread reduction (ties to the smallest label) while the budget allows.
struct GreedyResult {
    std::vector<int> labels;
    Rational objective = Rational::integer(0);
};
GreedyResult greedy_heuristic(const ScenarioGraphs& sg);

// Enumerates every budget-feasible blocking (throws past max_subsets) and
// returns the best one, ties toward the lexicographically smallest set.
struct OracleResult {
    std::vector<int> labels;
    Rational objective = Rational::integer(0);
    long long feasible_count = 0;
};
OracleResult brute_force_oracle(const ScenarioGraphs& sg, long long max_subsets = 1000000);

// LP relaxation of the full arc formulation (variables x and per-scenario
// node potentials), solved with the internal simplex.  Average units.
double solve_abf_lp(const ScenarioGraphs& sg);

// Root relaxation closed under the given lift's cuts: alternate master
// solves and full-scan separation until no cut is violated.  No branching,
// no over-budget prefixing.  Average units.
double converged_root_bound(const ScenarioGraphs& sg, Lift lift, bool extended_seeds,
                            bool label_closure);

} // namespace sbm
