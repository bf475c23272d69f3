#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "sbm/cuts.hpp"
#include "sbm/graph.hpp"
#include "sbm/simplex.hpp"

namespace sbm {

// Relaxed master: minimize the average of per-scenario spread variables
// theta_w subject to the budget row and the pooled optimality cuts.
// Each solve runs over a working subset of the pool and grows it until
// the working-set optimum satisfies every pooled cut, which makes that
// optimum exact for the full pool.
class MasterLp {
public:
    struct Options {
        // fix x_k = 0 when c_k alone exceeds the budget (valid for the
        // binary problem; disabled when studying pure LP relaxations)
        bool prefix_over_budget = true;
        double pool_feas_tol = 1e-9;
    };

    MasterLp(const Instance& inst, long long seed_total, Options opt = {});

    // Pool insert; duplicate (scenario, constant, coefficients) rows are
    // dropped.  Returns false on duplicate.
    bool add_cut(const BendersCut& cut);
    long long pool_size() const { return (long long)cuts_.size(); }
    const BendersCut& pool_cut(size_t i) const { return cuts_[i]; }

    struct Result {
        LpStatus status = LpStatus::Infeasible;
        double objective = 0.0;          // (seed_total + sum theta) / scenario count
        std::vector<double> x;           // per label
        std::vector<double> theta;       // per scenario
    };

    // fix[k]: -1 free, 0 or 1 fixed by branching.
    Result solve(const std::vector<int8_t>& fix);

private:
    const Instance* inst_;
    long long seed_total_;
    Options opt_;
    std::vector<BendersCut> cuts_;
    std::unordered_set<uint64_t> dedup_;
    std::vector<int> working_;
    std::vector<char> in_working_;
    std::vector<int> last_binding_;
    std::vector<double> base_ub_;
};

} // namespace sbm
