#include "sbm/cuts.hpp"

#include <algorithm>
#include <stdexcept>

namespace sbm {

namespace {

ScenarioGraphs::Csr build_csr(int node_count, const std::vector<Arc>& arcs,
                              const std::vector<int>& arc_ids) {
    ScenarioGraphs::Csr c;
    std::vector<int> deg(node_count, 0);
    for (const Arc& a : arcs) ++deg[a.tail];
    c.off.assign(node_count + 1, 0);
    for (int v = 0; v < node_count; ++v) c.off[v + 1] = c.off[v] + deg[v];
    c.head.resize(arcs.size());
    c.label.resize(arcs.size());
    c.arc_id.resize(arcs.size());
    std::vector<int> pos(c.off.begin(), c.off.end() - 1);
    for (size_t i = 0; i < arcs.size(); ++i) {
        int p = pos[arcs[i].tail]++;
        c.head[p] = arcs[i].head;
        c.label[p] = arcs[i].label;
        c.arc_id[p] = arc_ids[i];
    }
    return c;
}

} // namespace

const char* lift_name(Lift l) {
    switch (l) {
        case Lift::N: return "N";
        case Lift::P: return "P";
        default: return "H";
    }
}

Separator::Separator(const ScenarioGraphs& sg, const SeparatorOptions& opt)
    : sg_(&sg), opt_(opt) {
    const Instance& inst = sg.instance();
    const int n = inst.graph.node_count;
    // cap keeps a path of up to |V| zero-cost arcs strictly below length 1
    eps_ = std::min(1e-6, 1.0 / (2.0 * (n + 1)));
    unblockable_ = inst.unblockable_mask();

    if (opt.extended_seeds)
        seeds_ = extended_seed_sets(sg);
    else
        seeds_.assign(sg.scenario_count(), inst.seeds);
    seed_mask_.reserve(seeds_.size());
    for (const auto& s : seeds_) {
        seed_mask_.push_back(Bitset::of(n, s));
        seed_total_ += (long long)s.size();
    }

    if (opt.label_closure) {
        auto shortcuts = pure_label_path_closure(sg);
        closure_.resize(sg.scenario_count());
        for (int w = 0; w < sg.scenario_count(); ++w) {
            std::vector<Arc> arcs;
            std::vector<int> ids;
            const auto& live = inst.scenarios.live[w];
            arcs.reserve(live.size() + shortcuts[w].size());
            for (int id : live) {
                arcs.push_back(inst.graph.arcs[id]);
                ids.push_back(id);
            }
            for (const Arc& a : shortcuts[w]) {
                arcs.push_back(a);
                ids.push_back(-1);   // not a base arc
            }
            closure_[w] = build_csr(n, arcs, ids);
        }
    }

    dist_.assign(n, 0.0);
    pred_edge_.assign(n, -1);
    pred_node_.assign(n, -1);
    popped_.assign(n, 0);
    mask_words_ = (inst.label_count() + 63) / 64;
    mask_.assign(size_t(n) * mask_words_, 0);
    cnt_.assign(n, 0);
}

void Separator::dijkstra(int omega, std::span<const double> xbar, Lift lift, double eps,
                         const std::vector<int>& roots, bool use_closure) {
    const Instance& inst = sg_->instance();
    const int n = inst.graph.node_count;
    if (int(xbar.size()) != inst.label_count())
        throw std::invalid_argument("blocking vector size differs from label count");
    cur_csr_ = use_closure ? &closure_[omega] : &sg_->csr(omega);
    const auto& c = *cur_csr_;

    const double unreached = std::numeric_limits<double>::infinity();
    std::fill(dist_.begin(), dist_.end(), unreached);
    std::fill(pred_edge_.begin(), pred_edge_.end(), -1);
    std::fill(pred_node_.begin(), pred_node_.end(), -1);
    std::fill(popped_.begin(), popped_.end(), 0);
    pop_order_.clear();
    heap_.clear();
    const bool masks = lift != Lift::N;
    if (masks) std::fill(mask_.begin(), mask_.end(), 0);

    for (int s : roots) {
        dist_[s] = 0.0;
        heap_.emplace_back(0.0, s);
    }
    auto cmp = std::greater<std::pair<double, int>>();
    std::make_heap(heap_.begin(), heap_.end(), cmp);

    const double cutoff = 1.0;
    while (!heap_.empty()) {
        auto [d, u] = heap_.front();
        std::pop_heap(heap_.begin(), heap_.end(), cmp);
        heap_.pop_back();
        if (popped_[u] || d != dist_[u]) continue;   // stale entry
        if (d >= cutoff && !opt_.keep_searching_past_one) break;
        popped_[u] = 1;
        pop_order_.push_back(u);
        if (masks && pred_node_[u] >= 0) {
            // final path to u: predecessor labels plus the entering arc
            const uint64_t* pm = &mask_[size_t(pred_node_[u]) * mask_words_];
            uint64_t* um = &mask_[size_t(u) * mask_words_];
            for (int wq = 0; wq < mask_words_; ++wq) um[wq] = pm[wq];
            int k = c.label[pred_edge_[u]];
            um[k >> 6] |= uint64_t(1) << (k & 63);
        }
        const uint64_t* um = masks ? &mask_[size_t(u) * mask_words_] : nullptr;
        for (int e = c.off[u]; e < c.off[u + 1]; ++e) {
            int v = c.head[e];
            if (popped_[v]) continue;
            int k = c.label[e];
            double len = std::max(xbar[k], eps);
            if (lift == Lift::H && (um[k >> 6] >> (k & 63) & 1))
                len = 0.0;   // label already on the path to u
            double nd = d + len;
            if (nd >= cutoff && !opt_.keep_searching_past_one) continue;
            if (nd < dist_[v]) {
                dist_[v] = nd;
                pred_edge_[v] = e;
                pred_node_[v] = u;
                heap_.emplace_back(nd, v);
                std::push_heap(heap_.begin(), heap_.end(), cmp);
            }
        }
    }
}

Separator::SearchOut Separator::collect(int omega, Lift lift) {
    const Instance& inst = sg_->instance();
    const int nl = inst.label_count();
    const Bitset& in_seed = seed_mask_[omega];
    const auto& c = *cur_csr_;

    SearchOut out;
    out.coeff.assign(nl, 0.0);
    if (lift == Lift::N) {
        // subtree sizes over the activation forest, reached nodes only
        for (int v : pop_order_) cnt_[v] = 0;
        for (size_t i = pop_order_.size(); i-- > 0;) {
            int v = pop_order_[i];
            if (dist_[v] >= 1.0) continue;
            if (!in_seed.test(v)) {
                ++out.reached_outside;
                ++cnt_[v];
            }
            if (pred_node_[v] >= 0) cnt_[pred_node_[v]] += cnt_[v];
        }
        for (int v : pop_order_) {
            if (dist_[v] >= 1.0 || pred_edge_[v] < 0) continue;
            out.coeff[c.label[pred_edge_[v]]] += double(cnt_[v]);
        }
    } else {
        // one count per label per activation path
        for (int v : pop_order_) {
            if (dist_[v] >= 1.0) continue;
            if (!in_seed.test(v)) ++out.reached_outside;
            const uint64_t* vm = &mask_[size_t(v) * mask_words_];
            for (int wq = 0; wq < mask_words_; ++wq) {
                uint64_t bits = vm[wq];
                while (bits) {
                    int k = wq * 64 + __builtin_ctzll(bits);
                    bits &= bits - 1;
                    out.coeff[k] += 1.0;
                }
            }
        }
    }
    return out;
}

SeparationResult Separator::separate(int omega, std::span<const double> xbar,
                                     double theta_bar, Lift lift) {
    const bool use_closure = lift == Lift::H && opt_.label_closure;
    dijkstra(omega, xbar, lift, eps_, seeds_[omega], use_closure);
    SearchOut so = collect(omega, lift);

    SeparationResult r;
    r.cut.scenario = omega;
    r.cut.constant = double(so.reached_outside);
    r.cut.coeff = std::move(so.coeff);
    r.cut.lift = lift;
    r.cut.extended = opt_.extended_seeds;
    if (opt_.extended_seeds) {
        // feasible blockings never touch unblockable labels, so their
        // coefficients carry no information; drop them
        for (int k = 0; k < sg_->instance().label_count(); ++k)
            if (unblockable_.test(k)) r.cut.coeff[k] = 0.0;
    }
    r.value = r.cut.value_at(xbar);
    r.violated = r.value > theta_bar + opt_.violation_tol;
    if (emit_) emit_(r);
    return r;
}

DualArcSolution Separator::construct_dual_abf(int omega, std::span<const double> xbar) {
    const Instance& inst = sg_->instance();
    // true lengths, plain seeds, no shortcuts: the forest certifies the
    // subproblem optimum sum over reached nodes of (1 - dist)
    dijkstra(omega, xbar, Lift::N, 0.0, inst.seeds, false);
    const auto& c = *cur_csr_;

    for (int v : pop_order_) cnt_[v] = 0;
    for (size_t i = pop_order_.size(); i-- > 0;) {
        int v = pop_order_[i];
        if (dist_[v] >= 1.0) continue;
        ++cnt_[v];
        if (pred_node_[v] >= 0) cnt_[pred_node_[v]] += cnt_[v];
    }

    DualArcSolution dual;
    dual.alpha.assign(inst.seeds.size(), 0.0);
    for (size_t i = 0; i < inst.seeds.size(); ++i)
        dual.alpha[i] = double(cnt_[inst.seeds[i]]);

    const auto& live = inst.scenarios.live[omega];
    dual.beta.assign(live.size(), 0.0);
    for (int v : pop_order_) {
        if (dist_[v] >= 1.0 || pred_edge_[v] < 0) continue;
        int arc = c.arc_id[pred_edge_[v]];
        auto it = std::lower_bound(live.begin(), live.end(), arc);
        dual.beta[it - live.begin()] = double(cnt_[v]);
    }

    double obj = 0.0;
    for (double a : dual.alpha) obj += a;
    for (size_t i = 0; i < live.size(); ++i)
        obj -= dual.beta[i] * xbar[inst.graph.arcs[live[i]].label];
    dual.objective = obj;
    return dual;
}

double dual_max_violation(const ScenarioGraphs& sg, int omega,
                          const DualArcSolution& dual) {
    const Instance& inst = sg.instance();
    const auto& live = inst.scenarios.live[omega];
    const int n = inst.graph.node_count;

    double viol = 0.0;
    for (double a : dual.alpha) viol = std::max(viol, -a);
    for (double b : dual.beta) viol = std::max(viol, -b);

    // net[i] = alpha_i [seed] - sum_out beta + sum_in beta <= 1
    std::vector<double> net(n, 0.0);
    for (size_t i = 0; i < inst.seeds.size(); ++i)
        net[inst.seeds[i]] += dual.alpha[i];
    for (size_t i = 0; i < live.size(); ++i) {
        const Arc& a = inst.graph.arcs[live[i]];
        net[a.tail] -= dual.beta[i];
        net[a.head] += dual.beta[i];
    }
    for (int v = 0; v < n; ++v) viol = std::max(viol, net[v] - 1.0);
    return viol;
}

SeparationResult Separator::separate_lp_abf(int omega, std::span<const double> xbar,
                                            double theta_bar) {
    const Instance& inst = sg_->instance();
    const int n = inst.graph.node_count;
    const int nl = inst.label_count();
    if (int(xbar.size()) != nl)
        throw std::invalid_argument("blocking vector size differs from label count");
    const auto& live = inst.scenarios.live[omega];
    const auto& sset = seeds_[omega];
    const Bitset& in_seed = seed_mask_[omega];

    // maximize sum alpha - sum_a beta_a x_{label(a)}  ==>  minimize negated
    LpProblem lp;
    std::vector<int> alpha_var(sset.size());
    for (size_t i = 0; i < sset.size(); ++i)
        alpha_var[i] = lp.add_var(0.0, kLpInf, -1.0);
    std::vector<int> beta_var(live.size());
    for (size_t i = 0; i < live.size(); ++i)
        beta_var[i] = lp.add_var(0.0, kLpInf, xbar[inst.graph.arcs[live[i]].label]);

    std::vector<std::vector<std::pair<int, double>>> row_terms(n);
    for (size_t i = 0; i < sset.size(); ++i)
        row_terms[sset[i]].emplace_back(alpha_var[i], 1.0);
    for (size_t i = 0; i < live.size(); ++i) {
        const Arc& a = inst.graph.arcs[live[i]];
        row_terms[a.tail].emplace_back(beta_var[i], -1.0);
        row_terms[a.head].emplace_back(beta_var[i], 1.0);
    }
    for (int v = 0; v < n; ++v) {
        if (row_terms[v].empty()) continue;
        double rhs = opt_.extended_seeds ? (in_seed.test(v) ? 0.0 : 1.0) : 1.0;
        lp.add_row(std::move(row_terms[v]), 'L', rhs);
    }

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("dual separation subproblem did not solve");

    SeparationResult r;
    r.cut.scenario = omega;
    r.cut.lift = Lift::N;
    r.cut.extended = opt_.extended_seeds;
    double alpha_sum = 0.0;
    for (size_t i = 0; i < sset.size(); ++i) alpha_sum += sol.x[alpha_var[i]];
    r.cut.coeff.assign(nl, 0.0);
    for (size_t i = 0; i < live.size(); ++i)
        r.cut.coeff[inst.graph.arcs[live[i]].label] += sol.x[beta_var[i]];
    // raw objective counts every reached node; the stored cut counts those
    // outside the scenario seed set
    r.raw_objective = -sol.objective;
    r.cut.constant = alpha_sum - (opt_.extended_seeds ? 0.0 : double(sset.size()));
    if (opt_.extended_seeds)
        for (int k = 0; k < nl; ++k)
            if (unblockable_.test(k)) r.cut.coeff[k] = 0.0;
    r.value = r.cut.value_at(xbar);
    r.violated = r.value > theta_bar + opt_.violation_tol;
    if (emit_) emit_(r);
    return r;
}

std::vector<SeparationResult> Separator::cut_sampling(std::span<const double> theta_bar,
                                                      std::span<const double> xbar,
                                                      Lift lift, double tau) {
    const int ns = sg_->scenario_count();
    if (int(theta_bar.size()) != ns)
        throw std::invalid_argument("theta vector size differs from scenario count");
    if (!(tau > 0.0) || tau > 1.0)
        throw std::invalid_argument("sampling fraction must lie in (0, 1]");

    std::vector<int> order(ns);
    for (int w = 0; w < ns; ++w) order[w] = w;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (theta_bar[a] != theta_bar[b]) return theta_bar[a] < theta_bar[b];
        return a < b;
    });
    const long long target = (long long)std::ceil(tau * double(ns));

    std::vector<SeparationResult> out;
    for (int w : order) {
        SeparationResult r = separate(w, xbar, theta_bar[w], lift);
        if (r.violated) {
            out.push_back(std::move(r));
            if ((long long)out.size() >= target) break;
        }
    }
    return out;
}

} // namespace sbm
