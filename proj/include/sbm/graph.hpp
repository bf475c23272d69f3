#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sbm/rational.hpp"
#include "sbm/util.hpp"

namespace sbm {

// ---------------------------------------------------------------------------
// Core data model: a directed multigraph whose arcs carry labels, a sampled
// set of live-arc scenarios over it, and a blocking instance (label costs,
// budget, seed nodes).  Blocking a label removes every arc carrying it in
// every scenario.
// ---------------------------------------------------------------------------

struct Arc {
    int tail = 0;
    int head = 0;
    int label = 0;
};

struct LabeledDigraph {
    int node_count = 0;
    int label_count = 0;
    std::vector<Arc> arcs;

    // Throws std::invalid_argument on malformed data.  Parallel arcs are
    // fine; two arcs with identical (tail, head, label) are rejected.
    void validate() const;
};

struct ScenarioSet {
    // Per scenario, the live arc ids (indices into LabeledDigraph::arcs),
    // sorted ascending, duplicate-free.
    std::vector<std::vector<int>> live;

    int count() const { return int(live.size()); }
    void validate(const LabeledDigraph& g) const;
    void normalize();   // sorts each list
};

struct Instance {
    LabeledDigraph graph;
    std::vector<double> costs;   // per label; +inf marks an unblockable label
    double budget = 0.0;
    std::vector<int> seeds;      // sorted, distinct, nonempty
    ScenarioSet scenarios;

    int label_count() const { return graph.label_count; }
    bool unblockable(int k) const { return std::isinf(costs[k]); }
    Bitset unblockable_mask() const;
    Bitset seed_mask() const;
    double blocking_cost(const Bitset& labels) const;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Per-scenario adjacency (CSR), built once per instance; all reachability
// and evaluation queries run over it.
// ---------------------------------------------------------------------------

class ScenarioGraphs {
public:
    struct Csr {
        std::vector<int> off;      // size node_count + 1
        std::vector<int> head;     // arc heads, grouped by tail
        std::vector<int> label;
        std::vector<int> arc_id;   // index into Instance::graph.arcs
    };

    ScenarioGraphs() = default;
    explicit ScenarioGraphs(const Instance& inst);

    const Instance& instance() const { return *inst_; }
    int scenario_count() const { return int(csr_.size()); }
    const Csr& csr(int omega) const;

    // Nodes reachable from the seed set in scenario omega once every arc
    // whose label is in `blocked` is removed.  Sorted ascending.
    std::vector<int> reach_set(int omega, const Bitset& blocked) const;

    int spread(int omega, const Bitset& blocked) const;
    // Reached nodes outside `excluded` (used with extended seed sets).
    int spread_outside(int omega, const Bitset& blocked, const Bitset& excluded) const;
    long long spread_total(const Bitset& blocked) const;

private:
    int bfs(int omega, const Bitset& blocked, std::vector<int>* out) const;

    const Instance* inst_ = nullptr;
    std::vector<Csr> csr_;
};

// Average spread over all scenarios, exact.  With check_budget set, throws
// std::invalid_argument if `blocked` exceeds the budget or touches an
// unblockable label.
Rational eval_objective(const ScenarioGraphs& sg, const Bitset& blocked,
                        bool check_budget = true);

// Per scenario, the seed set closed under arcs with unblockable labels:
// nodes reachable from the seeds using live unblockable-label arcs only.
// Sorted ascending; always contains the seeds.
std::vector<std::vector<int>> extended_seed_sets(const ScenarioGraphs& sg);

// Per scenario, shortcut arcs (i, j, k) for every seed i and node j != i
// reachable from i by a live path using label k alone, when the scenario
// has no live arc (i, j, k) already.  The shortcuts feed the heuristic
// label-revisit lift; adding them never changes any reach_set.
std::vector<std::vector<Arc>> pure_label_path_closure(const ScenarioGraphs& sg);

} // namespace sbm
