#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sbm/graph.hpp"
#include "sbm/rng.hpp"

namespace sbm {

enum class GraphModel { BarabasiAlbert, ErdosRenyi };

struct GenConfig {
    GraphModel model = GraphModel::BarabasiAlbert;
    int nodes = 0;
    long long edges = 0;        // target undirected edge count
    int labels = 20;            // blockable labels 1..labels; label 0 is unblockable
    int label_class = 1;        // 1 or 2, selects the label-distribution mean
    double p_live = 0.1;
    int scenarios = 100;
    int seed_count = 1;
    int rr_samples = 1000;
    double budget = 1.0;
    uint64_t rng_seed = 0;
    bool parallel_arcs = false; // arc-copy augmentation after doubling
    double parallel_p1 = 0.10;  // probability of one extra copy per arc
    double parallel_p2 = 0.05;  // probability of two extra copies per arc
};

struct EdgeList {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;
};

// Undirected topology.  Preferential attachment starts from a clique on
// d = ceil(edges/nodes) nodes and attaches each new node to d existing
// nodes drawn proportionally to degree (duplicate targets redrawn, at most
// |existing| attempts per draw).  The uniform model draws `edges` distinct
// node pairs.
EdgeList gen_graph(const GenConfig& cfg);

// Mean of the per-edge label draw for the two supported label universes.
double label_mean(int labels, int label_class);

// Raw draw: failures before the first success at rate 1/(1+mu).
int negbin_draw(CounterRng& rng, double mu);

// One label per edge: draw v, shift by one, fold values above `labels`
// onto the unblockable label 0.  Result entries lie in {0, ..., labels}.
std::vector<int> assign_labels_negbin(size_t edge_count, int labels, double mu,
                                      uint64_t rng_seed);

// Each undirected edge becomes two opposite arcs sharing the edge label.
LabeledDigraph direct_and_label(const EdgeList& el, const std::vector<int>& edge_labels,
                                int labels);

// Per arc, append one extra copy with probability p1 or two with
// probability p2 (disjoint events, one uniform draw: u < p2 gives two,
// u < p2 + p1 gives one).  Copies draw labels uniformly among labels not
// already present on any arc with the same endpoints, so parallel arcs
// always differ in label; a copy with no label left is skipped.
LabeledDigraph add_parallel_arcs(const LabeledDigraph& g, double p1, double p2,
                                 uint64_t rng_seed);

// Independent per-arc coin flips at rate p_live; scenario w draws from
// substream w, so scenario sets are prefix-stable in the scenario count.
ScenarioSet sample_scenarios(const LabeledDigraph& g, double p_live, int count,
                             uint64_t rng_seed);

// Influence-maximization seed choice: sample rr_samples reverse-reachable
// sets (uniform root, lazily sampled live arcs at rate p_live), then pick
// seed_count nodes greedily by marginal coverage, ties to the smallest
// index.  Returns a sorted seed list.
std::vector<int> select_seeds_imm(const LabeledDigraph& g, double p_live,
                                  int seed_count, int rr_samples, uint64_t rng_seed);

struct SampleSizeParams {
    double sigma_sq_max = 1.0;  // worst-case variance of a scenario spread
    double eps = 0.1;           // target optimality tolerance
    double rho = 0.0;           // acceptance slack, rho < eps
    double feasible_count = 1;  // |X|, number of feasible blockings
    double alpha = 0.05;        // confidence level
};

// Scenario count sufficient for an (eps, rho)-optimal sample-average
// solution with probability 1 - alpha:
// ceil(3 sigma^2 / (eps - rho)^2 * ln(|X| / alpha)).
long long saa_sample_size(const SampleSizeParams& p);

// Full pipeline: topology, labels, doubling, optional parallel-arc
// augmentation, scenarios, seed selection.  Label 0 gets infinite cost,
// labels 1..cfg.labels cost one unit each.
Instance generate_instance(const GenConfig& cfg);

// Same pipeline starting from an already-built arc set (ingestion path).
Instance finish_instance(LabeledDigraph&& graph, const GenConfig& cfg);

} // namespace sbm
