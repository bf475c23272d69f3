#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sbm/graph.hpp"
#include "sbm/simplex.hpp"

namespace sbm {

// Lifting mode for combinatorial cut coefficients:
//   N  every label occurrence along an activation path is counted,
//   P  each label counts at most once per path,
//   H  revisited labels also traverse at zero cost during the search
//      (with pure-label shortcut arcs when the closure is enabled).
enum class Lift { N, P, H };

const char* lift_name(Lift l);   // "N", "P", "H"

// Scenario optimality cut  theta_w >= constant - sum_k coeff[k] x_k.
// The constant counts reached nodes outside the scenario seed set I_w
// (I_w is the extended set when `extended`, else the plain seeds).
struct BendersCut {
    int scenario = 0;
    double constant = 0.0;
    std::vector<double> coeff;   // per label, >= 0
    Lift lift = Lift::N;
    bool extended = false;

    double value_at(std::span<const double> x) const {
        double v = constant;
        for (size_t k = 0; k < coeff.size(); ++k) v -= coeff[k] * x[k];
        return v;
    }
};

struct SeparationResult {
    BendersCut cut;
    double value = 0.0;     // cut value at the separated point
    bool violated = false;  // value > theta_bar + tolerance
    // raw dual objective (counting all reached nodes), set by the LP path
    double raw_objective = std::numeric_limits<double>::quiet_NaN();
};

// Optimal dual of the scenario subproblem at a given x: alpha per seed
// (aligned with Instance::seeds), beta per live arc (aligned with the
// scenario's sorted live-arc list).  Built combinatorially from a
// shortest-path activation forest with true arc lengths.
struct DualArcSolution {
    std::vector<double> alpha;
    std::vector<double> beta;
    double objective = 0.0;   // sum alpha - sum_a beta_a x_{label(a)}
};

// Largest constraint violation of a dual candidate (0 when feasible):
// checks alpha, beta >= 0 and the per-node degree constraints.
double dual_max_violation(const ScenarioGraphs& sg, int omega,
                          const DualArcSolution& dual);

struct SeparatorOptions {
    bool extended_seeds = false;   // close seeds under unblockable-label arcs
    bool label_closure = false;    // pure-label shortcuts for lift H
    double violation_tol = 1e-6;
    bool keep_searching_past_one = false;   // disable the distance-1 early exit
};

// Per-instance separation engine; reuses internal buffers across calls.
class Separator {
public:
    Separator(const ScenarioGraphs& sg, const SeparatorOptions& opt);

    // Invoked with every separation result produced (violated or not);
    // hooks the cut trace and the in-memory cut log.
    void set_emitter(std::function<void(const SeparationResult&)> fn) {
        emit_ = std::move(fn);
    }

    const ScenarioGraphs& graphs() const { return *sg_; }
    const SeparatorOptions& options() const { return opt_; }
    double epsilon() const { return eps_; }

    // I_w per scenario (just the seeds when extension is off).
    const std::vector<int>& scenario_seeds(int omega) const { return seeds_[omega]; }
    long long seed_total() const { return seed_total_; }

    // Shortest-path separation with per-arc length max(x_k, epsilon) and
    // the requested lift; nodes at distance >= 1 are never explored unless
    // the early exit is disabled (the emitted cut is identical either way).
    SeparationResult separate(int omega, std::span<const double> xbar, double theta_bar,
                              Lift lift);

    // Activation-forest dual at xbar, true lengths, plain seeds.
    DualArcSolution construct_dual_abf(int omega, std::span<const double> xbar);

    // Dual subproblem solved as an explicit LP; the returned cut is in the
    // same form as the combinatorial one.
    SeparationResult separate_lp_abf(int omega, std::span<const double> xbar,
                                     double theta_bar);

    // Scan scenarios by nondecreasing theta_bar (ties by index), separating
    // until ceil(tau * count) violated cuts are found or every scenario has
    // been tried.  Returns the violated cuts only.
    std::vector<SeparationResult> cut_sampling(std::span<const double> theta_bar,
                                               std::span<const double> xbar, Lift lift,
                                               double tau);

private:
    struct SearchOut {
        long long reached_outside = 0;
        // per-label path-count coefficients per the lift
        std::vector<double> coeff;
    };
    void dijkstra(int omega, std::span<const double> xbar, Lift lift, double eps,
                  const std::vector<int>& roots, bool use_closure);
    SearchOut collect(int omega, Lift lift);

    const ScenarioGraphs* sg_;
    SeparatorOptions opt_;
    std::function<void(const SeparationResult&)> emit_;
    double eps_;
    std::vector<std::vector<int>> seeds_;        // I_w, sorted
    std::vector<Bitset> seed_mask_;
    long long seed_total_ = 0;
    Bitset unblockable_;
    std::vector<ScenarioGraphs::Csr> closure_;   // base + shortcuts, lift H only

    // search workspace
    std::vector<double> dist_;
    std::vector<int> pred_edge_;                 // CSR entry index, -1 at roots
    std::vector<int> pred_node_;
    std::vector<char> popped_;
    std::vector<int> pop_order_;
    std::vector<std::pair<double, int>> heap_;
    std::vector<uint64_t> mask_;                 // per-node label set, lift P/H
    std::vector<long long> cnt_;
    int mask_words_ = 0;
    const ScenarioGraphs::Csr* cur_csr_ = nullptr;
};

} // namespace sbm
