#include "sbm/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

namespace sbm {

void LabeledDigraph::validate() const {
    if (node_count < 1) throw std::invalid_argument("graph needs at least one node");
    if (label_count < 1) throw std::invalid_argument("graph needs at least one label");
    std::unordered_set<uint64_t> seen;
    seen.reserve(arcs.size() * 2);
    for (size_t i = 0; i < arcs.size(); ++i) {
        const Arc& a = arcs[i];
        if (a.tail < 0 || a.tail >= node_count || a.head < 0 || a.head >= node_count)
            throw std::invalid_argument(fmt::format("arc {} endpoint out of range", i));
        if (a.label < 0 || a.label >= label_count)
            throw std::invalid_argument(fmt::format("arc {} label out of range", i));
        // parallel arcs must differ in label
        uint64_t key = (uint64_t(a.tail) * node_count + a.head) * uint64_t(label_count) + a.label;
        if (!seen.insert(key).second)
            throw std::invalid_argument(
                fmt::format("duplicate arc ({},{}) with label {}", a.tail, a.head, a.label));
    }
}

void ScenarioSet::validate(const LabeledDigraph& g) const {
    if (live.empty()) throw std::invalid_argument("scenario set is empty");
    const int m = int(g.arcs.size());
    for (size_t w = 0; w < live.size(); ++w) {
        const auto& ids = live[w];
        for (size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] < 0 || ids[i] >= m)
                throw std::invalid_argument(fmt::format("scenario {} arc id out of range", w));
            if (i > 0 && ids[i] <= ids[i - 1])
                throw std::invalid_argument(fmt::format("scenario {} arc ids not sorted unique", w));
        }
    }
}

void ScenarioSet::normalize() {
    for (auto& ids : live) std::sort(ids.begin(), ids.end());
}

Bitset Instance::unblockable_mask() const {
    Bitset b(label_count());
    for (int k = 0; k < label_count(); ++k)
        if (unblockable(k)) b.set(k);
    return b;
}

Bitset Instance::seed_mask() const {
    return Bitset::of(graph.node_count, seeds);
}

double Instance::blocking_cost(const Bitset& labels) const {
    double c = 0.0;
    for (int k = 0; k < label_count(); ++k)
        if (labels.test(k)) c += costs[k];
    return c;
}

void Instance::validate() const {
    graph.validate();
    if (int(costs.size()) != label_count())
        throw std::invalid_argument("cost vector size differs from label count");
    for (int k = 0; k < label_count(); ++k)
        if (!(costs[k] >= 0.0) && !std::isinf(costs[k]))
            throw std::invalid_argument(fmt::format("cost of label {} is negative or NaN", k));
    if (!(budget >= 0.0)) throw std::invalid_argument("budget is negative or NaN");
    if (seeds.empty()) throw std::invalid_argument("seed set is empty");
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (seeds[i] < 0 || seeds[i] >= graph.node_count)
            throw std::invalid_argument("seed out of range");
        if (i > 0 && seeds[i] <= seeds[i - 1])
            throw std::invalid_argument("seeds not sorted distinct");
    }
    scenarios.validate(graph);
}

ScenarioGraphs::ScenarioGraphs(const Instance& inst) : inst_(&inst) {
    inst.validate();
    const int n = inst.graph.node_count;
    csr_.resize(inst.scenarios.count());
    std::vector<int> deg(n);
    for (int w = 0; w < inst.scenarios.count(); ++w) {
        const auto& ids = inst.scenarios.live[w];
        Csr& c = csr_[w];
        std::fill(deg.begin(), deg.end(), 0);
        for (int id : ids) ++deg[inst.graph.arcs[id].tail];
        c.off.assign(n + 1, 0);
        for (int v = 0; v < n; ++v) c.off[v + 1] = c.off[v] + deg[v];
        c.head.resize(ids.size());
        c.label.resize(ids.size());
        c.arc_id.resize(ids.size());
        std::vector<int> pos(c.off.begin(), c.off.end() - 1);
        for (int id : ids) {
            const Arc& a = inst.graph.arcs[id];
            int p = pos[a.tail]++;
            c.head[p] = a.head;
            c.label[p] = a.label;
            c.arc_id[p] = id;
        }
    }
}

const ScenarioGraphs::Csr& ScenarioGraphs::csr(int omega) const {
    if (omega < 0 || omega >= scenario_count())
        throw std::out_of_range("scenario index out of range");
    return csr_[omega];
}

int ScenarioGraphs::bfs(int omega, const Bitset& blocked, std::vector<int>* out) const {
    const Csr& c = csr(omega);
    const int n = inst_->graph.node_count;
    std::vector<char> visited(n, 0);
    std::vector<int> queue;
    queue.reserve(inst_->seeds.size());
    for (int s : inst_->seeds) {
        visited[s] = 1;
        queue.push_back(s);
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int e = c.off[u]; e < c.off[u + 1]; ++e) {
            if (blocked.test(c.label[e])) continue;
            int v = c.head[e];
            if (!visited[v]) {
                visited[v] = 1;
                queue.push_back(v);
            }
        }
    }
    if (out) {
        out->assign(queue.begin(), queue.end());
        std::sort(out->begin(), out->end());
    }
    return int(queue.size());
}

std::vector<int> ScenarioGraphs::reach_set(int omega, const Bitset& blocked) const {
    std::vector<int> out;
    bfs(omega, blocked, &out);
    return out;
}

int ScenarioGraphs::spread(int omega, const Bitset& blocked) const {
    return bfs(omega, blocked, nullptr);
}

int ScenarioGraphs::spread_outside(int omega, const Bitset& blocked,
                                   const Bitset& excluded) const {
    std::vector<int> reach;
    bfs(omega, blocked, &reach);
    int n = 0;
    for (int v : reach)
        if (!excluded.test(v)) ++n;
    return n;
}

long long ScenarioGraphs::spread_total(const Bitset& blocked) const {
    long long total = 0;
    for (int w = 0; w < scenario_count(); ++w) total += bfs(w, blocked, nullptr);
    return total;
}

Rational eval_objective(const ScenarioGraphs& sg, const Bitset& blocked,
                        bool check_budget) {
    const Instance& inst = sg.instance();
    if (blocked.size() != inst.label_count())
        throw std::invalid_argument("blocking vector size differs from label count");
    if (check_budget) {
        for (int k = 0; k < inst.label_count(); ++k)
            if (blocked.test(k) && inst.unblockable(k))
                throw std::invalid_argument(fmt::format("label {} cannot be blocked", k));
        if (inst.blocking_cost(blocked) > inst.budget)
            throw std::invalid_argument("blocking exceeds the budget");
    }
    return Rational(sg.spread_total(blocked), sg.scenario_count());
}

std::vector<std::vector<int>> extended_seed_sets(const ScenarioGraphs& sg) {
    const Instance& inst = sg.instance();
    Bitset blockable(inst.label_count());
    for (int k = 0; k < inst.label_count(); ++k)
        if (!inst.unblockable(k)) blockable.set(k);
    // reach restricted to unblockable labels = block everything blockable
    std::vector<std::vector<int>> out(sg.scenario_count());
    for (int w = 0; w < sg.scenario_count(); ++w)
        out[w] = sg.reach_set(w, blockable);
    return out;
}

std::vector<std::vector<Arc>> pure_label_path_closure(const ScenarioGraphs& sg) {
    const Instance& inst = sg.instance();
    const int n = inst.graph.node_count;
    const int nl = inst.label_count();
    std::vector<std::vector<Arc>> out(sg.scenario_count());

    std::vector<int> stamp(n, -1);
    int epoch = 0;
    for (int w = 0; w < sg.scenario_count(); ++w) {
        const auto& ids = inst.scenarios.live[w];
        // group live arcs by label
        std::vector<int> cnt(nl + 1, 0);
        for (int id : ids) ++cnt[inst.graph.arcs[id].label + 1];
        for (int k = 0; k < nl; ++k) cnt[k + 1] += cnt[k];
        std::vector<std::pair<int, int>> by_label(ids.size());   // (tail, head)
        {
            std::vector<int> pos(cnt.begin(), cnt.end() - 1);
            for (int id : ids) {
                const Arc& a = inst.graph.arcs[id];
                by_label[pos[a.label]++] = {a.tail, a.head};
            }
        }
        std::unordered_set<uint64_t> present;
        present.reserve(ids.size() * 2);
        for (int id : ids) {
            const Arc& a = inst.graph.arcs[id];
            present.insert((uint64_t(a.tail) * n + a.head) * uint64_t(nl) + a.label);
        }

        std::vector<int> queue;
        for (int k = 0; k < nl; ++k) {
            const int lo = cnt[k], hi = cnt[k + 1];
            if (lo == hi) continue;
            // adjacency over label-k arcs only
            std::vector<std::pair<int, int>> arcs_k(by_label.begin() + lo,
                                                    by_label.begin() + hi);
            std::sort(arcs_k.begin(), arcs_k.end());
            for (int s : inst.seeds) {
                auto first = std::lower_bound(arcs_k.begin(), arcs_k.end(),
                                              std::make_pair(s, -1));
                if (first == arcs_k.end() || first->first != s) continue;
                ++epoch;
                stamp[s] = epoch;
                queue.assign(1, s);
                for (size_t qi = 0; qi < queue.size(); ++qi) {
                    int u = queue[qi];
                    auto it = std::lower_bound(arcs_k.begin(), arcs_k.end(),
                                               std::make_pair(u, -1));
                    for (; it != arcs_k.end() && it->first == u; ++it) {
                        int v = it->second;
                        if (stamp[v] != epoch) {
                            stamp[v] = epoch;
                            queue.push_back(v);
                        }
                    }
                }
                for (size_t qi = 1; qi < queue.size(); ++qi) {
                    int j = queue[qi];
                    uint64_t key = (uint64_t(s) * n + j) * uint64_t(nl) + k;
                    if (!present.count(key)) out[w].push_back({s, j, k});
                }
            }
        }
        // deterministic order independent of discovery sequence
        std::sort(out[w].begin(), out[w].end(), [](const Arc& a, const Arc& b) {
            if (a.tail != b.tail) return a.tail < b.tail;
            if (a.head != b.head) return a.head < b.head;
            return a.label < b.label;
        });
    }
    return out;
}

} // namespace sbm
