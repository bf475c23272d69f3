#include "sbm/gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace sbm {

namespace {

EdgeList gen_ba(const GenConfig& cfg, CounterRng& rng) {
    const int n = cfg.nodes;
    const int d = int(ceil_div(cfg.edges, n));
    if (d < 1 || d > n)
        throw std::invalid_argument("attachment degree out of range for node count");

    EdgeList el;
    el.node_count = n;
    std::vector<int> endpoints;   // one entry per incident edge end
    endpoints.reserve(2 * (size_t(n) * d));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            el.edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    std::vector<int> chosen;
    for (int v = d; v < n; ++v) {
        chosen.clear();
        for (int t = 0; t < d; ++t) {
            // degree-proportional target; duplicates redrawn at most v times
            for (int attempt = 0; attempt < v; ++attempt) {
                int u = endpoints[rng.next_below(endpoints.size())];
                if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) {
                    chosen.push_back(u);
                    break;
                }
            }
        }
        for (int u : chosen) {
            el.edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }
    return el;
}

EdgeList gen_er(const GenConfig& cfg, CounterRng& rng) {
    const int n = cfg.nodes;
    const long long max_edges = (long long)n * (n - 1) / 2;
    if (cfg.edges > max_edges)
        throw std::invalid_argument("edge count exceeds simple-graph capacity");

    EdgeList el;
    el.node_count = n;
    std::unordered_set<uint64_t> seen;
    seen.reserve(size_t(cfg.edges) * 2);
    while ((long long)el.edges.size() < cfg.edges) {
        int u = int(rng.next_below(n));
        int v = int(rng.next_below(n));
        if (u == v) continue;
        uint64_t lo = std::min(u, v), hi = std::max(u, v);
        if (seen.insert(lo << 32 | hi).second)
            el.edges.emplace_back(int(lo), int(hi));
    }
    return el;
}

} // namespace

EdgeList gen_graph(const GenConfig& cfg) {
    if (cfg.nodes < 2) throw std::invalid_argument("graph needs at least two nodes");
    if (cfg.edges < 1) throw std::invalid_argument("graph needs at least one edge");
    CounterRng rng(cfg.rng_seed, CounterRng::kGraphStream);
    return cfg.model == GraphModel::BarabasiAlbert ? gen_ba(cfg, rng) : gen_er(cfg, rng);
}

double label_mean(int labels, int label_class) {
    if (label_class == 1) {
        if (labels == 20) return 5.0;
        if (labels == 30) return 8.0;
    } else if (label_class == 2) {
        if (labels == 20) return 8.0;
        if (labels == 30) return 12.0;
    }
    throw std::invalid_argument(
        fmt::format("no label distribution for {} labels, class {}", labels, label_class));
}

int negbin_draw(CounterRng& rng, double mu) {
    return rng.geometric_failures(1.0 / (1.0 + mu));
}

std::vector<int> assign_labels_negbin(size_t edge_count, int labels, double mu,
                                      uint64_t rng_seed) {
    if (labels < 1) throw std::invalid_argument("need at least one blockable label");
    CounterRng rng(rng_seed, CounterRng::kLabelStream);
    std::vector<int> out(edge_count);
    for (size_t i = 0; i < edge_count; ++i) {
        int v = negbin_draw(rng, mu) + 1;
        out[i] = v > labels ? 0 : v;
    }
    return out;
}

LabeledDigraph direct_and_label(const EdgeList& el, const std::vector<int>& edge_labels,
                                int labels) {
    if (edge_labels.size() != el.edges.size())
        throw std::invalid_argument("one label per edge required");
    LabeledDigraph g;
    g.node_count = el.node_count;
    g.label_count = labels + 1;
    g.arcs.reserve(el.edges.size() * 2);
    for (size_t e = 0; e < el.edges.size(); ++e) {
        auto [u, v] = el.edges[e];
        g.arcs.push_back({u, v, edge_labels[e]});
        g.arcs.push_back({v, u, edge_labels[e]});
    }
    return g;
}

LabeledDigraph add_parallel_arcs(const LabeledDigraph& g, double p1, double p2,
                                 uint64_t rng_seed) {
    CounterRng rng(rng_seed, CounterRng::kParallelStream);
    LabeledDigraph out = g;
    const int nl = g.label_count;
    // labels already present per (tail, head), including appended copies
    std::unordered_map<uint64_t, std::vector<int>> present;
    present.reserve(g.arcs.size() * 2);
    for (const Arc& a : g.arcs)
        present[uint64_t(a.tail) << 32 | uint64_t(a.head)].push_back(a.label);

    for (const Arc& a : g.arcs) {
        double u = rng.next_unit();
        int copies = u < p2 ? 2 : (u < p2 + p1 ? 1 : 0);
        if (copies == 0) continue;
        auto& used = present[uint64_t(a.tail) << 32 | uint64_t(a.head)];
        for (int c = 0; c < copies; ++c) {
            std::vector<int> sorted_used(used);
            std::sort(sorted_used.begin(), sorted_used.end());
            int avail = nl - int(sorted_used.size());
            if (avail <= 0) break;   // every label taken between these endpoints
            int r = int(rng.next_below(avail));
            // r-th label not in sorted_used
            int lab = r;
            for (int taken : sorted_used) {
                if (taken <= lab) ++lab;
                else break;
            }
            out.arcs.push_back({a.tail, a.head, lab});
            used.push_back(lab);
        }
    }
    return out;
}

ScenarioSet sample_scenarios(const LabeledDigraph& g, double p_live, int count,
                             uint64_t rng_seed) {
    if (count < 1) throw std::invalid_argument("need at least one scenario");
    ScenarioSet ss;
    ss.live.resize(count);
    const int m = int(g.arcs.size());
    for (int w = 0; w < count; ++w) {
        CounterRng rng(rng_seed, CounterRng::kScenarioStream, uint64_t(w));
        auto& ids = ss.live[w];
        for (int a = 0; a < m; ++a)
            if (rng.bernoulli(p_live)) ids.push_back(a);
    }
    return ss;
}

std::vector<int> select_seeds_imm(const LabeledDigraph& g, double p_live,
                                  int seed_count, int rr_samples, uint64_t rng_seed) {
    const int n = g.node_count;
    if (seed_count < 1 || seed_count > n)
        throw std::invalid_argument("seed count out of range");
    if (rr_samples < 1) throw std::invalid_argument("need at least one sample");

    // reverse adjacency
    std::vector<int> deg(n, 0), off(n + 1, 0);
    for (const Arc& a : g.arcs) ++deg[a.head];
    for (int v = 0; v < n; ++v) off[v + 1] = off[v] + deg[v];
    std::vector<int> in_tail(g.arcs.size());
    {
        std::vector<int> pos(off.begin(), off.end() - 1);
        for (const Arc& a : g.arcs) in_tail[pos[a.head]++] = a.tail;
    }

    CounterRng root_rng(rng_seed, CounterRng::kSeedRootStream);
    std::vector<std::vector<int>> rr_sets(rr_samples);
    std::vector<int> stamp(n, -1);
    for (int j = 0; j < rr_samples; ++j) {
        CounterRng flip_rng(rng_seed, CounterRng::kRrStream, uint64_t(j));
        int root = int(root_rng.next_below(n));
        auto& rr = rr_sets[j];
        rr.push_back(root);
        stamp[root] = j;
        // lazy realization: each in-arc of a visited node is flipped once
        for (size_t qi = 0; qi < rr.size(); ++qi) {
            int v = rr[qi];
            for (int e = off[v]; e < off[v + 1]; ++e) {
                bool alive = flip_rng.bernoulli(p_live);
                int u = in_tail[e];
                if (alive && stamp[u] != j) {
                    stamp[u] = j;
                    rr.push_back(u);
                }
            }
        }
    }

    // greedy max coverage, ties to the smallest node index
    std::vector<long long> cov(n, 0);
    for (const auto& rr : rr_sets)
        for (int v : rr) ++cov[v];
    std::vector<char> covered(rr_samples, 0), chosen(n, 0);
    std::vector<int> seeds;
    for (int s = 0; s < seed_count; ++s) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!chosen[v] && (best < 0 || cov[v] > cov[best])) best = v;
        chosen[best] = 1;
        seeds.push_back(best);
        for (int j = 0; j < rr_samples; ++j) {
            if (covered[j]) continue;
            const auto& rr = rr_sets[j];
            if (std::find(rr.begin(), rr.end(), best) == rr.end()) continue;
            covered[j] = 1;
            for (int v : rr) --cov[v];
        }
    }
    std::sort(seeds.begin(), seeds.end());
    return seeds;
}

long long saa_sample_size(const SampleSizeParams& p) {
    if (!(p.sigma_sq_max >= 0)) throw std::invalid_argument("variance must be nonnegative");
    if (!(p.eps > p.rho) || !(p.rho >= 0))
        throw std::invalid_argument("need eps > rho >= 0");
    if (!(p.alpha > 0) || !(p.alpha < 1)) throw std::invalid_argument("alpha must be in (0,1)");
    if (!(p.feasible_count >= p.alpha))
        throw std::invalid_argument("feasible count below alpha");
    double gap = p.eps - p.rho;
    double v = 3.0 * p.sigma_sq_max / (gap * gap) * std::log(p.feasible_count / p.alpha);
    return (long long)std::ceil(v);
}

Instance generate_instance(const GenConfig& cfg) {
    EdgeList el = gen_graph(cfg);
    double mu = label_mean(cfg.labels, cfg.label_class);
    std::vector<int> labels =
        assign_labels_negbin(el.edges.size(), cfg.labels, mu, cfg.rng_seed);
    LabeledDigraph g = direct_and_label(el, labels, cfg.labels);
    return finish_instance(std::move(g), cfg);
}

Instance finish_instance(LabeledDigraph&& graph, const GenConfig& cfg) {
    Instance inst;
    inst.graph = std::move(graph);
    if (cfg.parallel_arcs)
        inst.graph = add_parallel_arcs(inst.graph, cfg.parallel_p1, cfg.parallel_p2,
                                       cfg.rng_seed);
    inst.costs.assign(inst.graph.label_count, 1.0);
    inst.costs[0] = std::numeric_limits<double>::infinity();
    inst.budget = cfg.budget;
    inst.scenarios = sample_scenarios(inst.graph, cfg.p_live, cfg.scenarios, cfg.rng_seed);
    inst.seeds = select_seeds_imm(inst.graph, cfg.p_live, cfg.seed_count,
                                  cfg.rr_samples, cfg.rng_seed);
    inst.validate();
    return inst;
}

} // namespace sbm
