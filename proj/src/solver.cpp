#include "sbm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <queue>
#include <stdexcept>

#include <fmt/format.h>

#include "sbm/instance_io.hpp"
#include "sbm/master.hpp"

namespace sbm {

const char* setting_name(Setting s) {
    switch (s) {
        case Setting::Lp: return "lp";
        case Setting::I: return "i";
        case Setting::IPlus: return "i+";
        case Setting::IPlusS: return "i+s";
        case Setting::IPlusSF: return "i+sf";
        case Setting::IPlusSFP: return "i+sfp";
        case Setting::IPlusSFH: return "i+sfh";
        default: return "g";
    }
}

std::optional<Setting> parse_setting(const std::string& name) {
    for (Setting s : {Setting::Lp, Setting::I, Setting::IPlus, Setting::IPlusS,
                      Setting::IPlusSF, Setting::IPlusSFP, Setting::IPlusSFH,
                      Setting::Greedy})
        if (name == setting_name(s)) return s;
    return std::nullopt;
}

ResolvedSettings resolve_settings(const SolverSettings& s) {
    ResolvedSettings r;
    r.lp_separation = s.setting == Setting::Lp;
    const bool plus = s.setting == Setting::IPlus || s.setting == Setting::IPlusS ||
                      s.setting == Setting::IPlusSF || s.setting == Setting::IPlusSFP ||
                      s.setting == Setting::IPlusSFH;
    const bool sampling = s.setting == Setting::IPlusS || s.setting == Setting::IPlusSF ||
                          s.setting == Setting::IPlusSFP || s.setting == Setting::IPlusSFH;
    r.extended_seeds = s.extended_seeds.value_or(plus);
    r.greedy_start = s.greedy_start.value_or(plus);
    r.initial_cuts = s.initial_cuts.value_or(plus);
    r.fractional_separation = s.fractional_separation.value_or(
        s.setting == Setting::IPlusSF || s.setting == Setting::IPlusSFP ||
        s.setting == Setting::IPlusSFH);
    r.label_closure = s.label_closure.value_or(s.setting == Setting::IPlusSFH);
    r.lift = s.lift.value_or(s.setting == Setting::IPlusSFP  ? Lift::P
                             : s.setting == Setting::IPlusSFH ? Lift::H
                                                              : Lift::N);
    r.tau = s.tau > 0 ? s.tau : (sampling ? 0.2 : 1.0);
    return r;
}

GreedyResult greedy_heuristic(const ScenarioGraphs& sg) {
    const Instance& inst = sg.instance();
    const int nl = inst.label_count();
    Bitset blocked(nl);
    double remaining = inst.budget;
    GreedyResult out;
    for (;;) {
        int best_k = -1;
        long long best_total = 0;
        for (int k = 0; k < nl; ++k) {
            if (blocked.test(k) || inst.unblockable(k) || inst.costs[k] > remaining)
                continue;
            blocked.set(k);
            long long total = sg.spread_total(blocked);
            blocked.reset(k);
            if (best_k < 0 || total < best_total) {
                best_k = k;
                best_total = total;
            }
        }
        if (best_k < 0) break;
        blocked.set(best_k);
        remaining -= inst.costs[best_k];
        out.labels.push_back(best_k);
    }
    std::sort(out.labels.begin(), out.labels.end());
    out.objective = Rational(sg.spread_total(blocked), sg.scenario_count());
    return out;
}

OracleResult brute_force_oracle(const ScenarioGraphs& sg, long long max_subsets) {
    const Instance& inst = sg.instance();
    const int nl = inst.label_count();
    Bitset blocked(nl);
    std::vector<int> current;
    OracleResult out;
    bool have = false;

    auto consider = [&]() {
        ++out.feasible_count;
        if (out.feasible_count > max_subsets)
            throw std::runtime_error(
                fmt::format("more than {} feasible blockings", max_subsets));
        Rational v(sg.spread_total(blocked), sg.scenario_count());
        if (!have || v < out.objective ||
            (v == out.objective &&
             std::lexicographical_compare(current.begin(), current.end(),
                                          out.labels.begin(), out.labels.end()))) {
            have = true;
            out.objective = v;
            out.labels = current;
        }
    };

    // depth-first subset enumeration over blockable labels
    auto rec = [&](auto&& self, int from, double remaining) -> void {
        consider();
        for (int k = from; k < nl; ++k) {
            if (inst.unblockable(k) || inst.costs[k] > remaining) continue;
            blocked.set(k);
            current.push_back(k);
            self(self, k + 1, remaining - inst.costs[k]);
            current.pop_back();
            blocked.reset(k);
        }
    };
    rec(rec, 0, inst.budget);
    return out;
}

double solve_abf_lp(const ScenarioGraphs& sg) {
    const Instance& inst = sg.instance();
    const int nl = inst.label_count();
    const int n = inst.graph.node_count;
    const int ns = sg.scenario_count();
    const Bitset seeds = inst.seed_mask();

    LpProblem lp;
    for (int k = 0; k < nl; ++k)
        lp.add_var(0.0, inst.unblockable(k) ? 0.0 : 1.0, 0.0);
    // y variables per (scenario, node); seeds pinned to one
    std::vector<int> yvar(size_t(ns) * n);
    for (int w = 0; w < ns; ++w)
        for (int v = 0; v < n; ++v) {
            double lo = seeds.test(v) ? 1.0 : 0.0;
            yvar[size_t(w) * n + v] = lp.add_var(lo, 1.0, 1.0 / double(ns));
        }

    std::vector<std::pair<int, double>> budget;
    for (int k = 0; k < nl; ++k)
        if (!inst.unblockable(k) && inst.costs[k] != 0.0)
            budget.emplace_back(k, inst.costs[k]);
    if (!budget.empty()) lp.add_row(std::move(budget), 'L', inst.budget);

    for (int w = 0; w < ns; ++w)
        for (int id : inst.scenarios.live[w]) {
            const Arc& a = inst.graph.arcs[id];
            // y_head >= y_tail - x_label
            lp.add_row({{yvar[size_t(w) * n + a.head], 1.0},
                        {yvar[size_t(w) * n + a.tail], -1.0},
                        {a.label, 1.0}},
                       'G', 0.0);
        }

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("arc-formulation relaxation did not solve");
    return sol.objective;
}

double converged_root_bound(const ScenarioGraphs& sg, Lift lift, bool extended_seeds,
                            bool label_closure) {
    SeparatorOptions sopt;
    sopt.extended_seeds = extended_seeds;
    sopt.label_closure = label_closure;
    Separator sep(sg, sopt);
    MasterLp master(sg.instance(), sep.seed_total(), {.prefix_over_budget = false});
    std::vector<int8_t> fix(sg.instance().label_count(), -1);
    for (;;) {
        MasterLp::Result res = master.solve(fix);
        if (res.status != LpStatus::Optimal)
            throw std::runtime_error("root relaxation did not solve");
        auto found = sep.cut_sampling(res.theta, res.x, lift, 1.0);
        if (found.empty()) return res.objective;
        int added = 0;
        for (auto& r : found)
            if (master.add_cut(r.cut)) ++added;
        if (added == 0)
            throw std::runtime_error("violated cut already pooled; numerical stall");
    }
}

namespace {

class CutTracer {
public:
    CutTracer(const std::string& path, std::vector<BendersCut>* log) : log_(log) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw std::runtime_error(fmt::format("{}: cannot open trace file", path));
        }
    }
    void operator()(const SeparationResult& r) {
        if (log_) log_->push_back(r.cut);
        if (!file_.is_open()) return;
        file_ << r.cut.scenario << ' ' << fmt_num(r.cut.constant);
        for (size_t k = 0; k < r.cut.coeff.size(); ++k)
            if (r.cut.coeff[k] != 0.0)
                file_ << ' ' << k << ':' << fmt_num(r.cut.coeff[k]);
        file_ << " lift=" << lift_name(r.cut.lift) << " violated=" << (r.violated ? 1 : 0)
              << '\n';
    }

private:
    std::ofstream file_;
    std::vector<BendersCut>* log_;
};

struct Node {
    std::vector<int8_t> fix;
    double bound = 0.0;
    long long id = 0;
};

} // namespace

SolveReport branch_and_benders_cut(const ScenarioGraphs& sg, const SolverSettings& s) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };

    const Instance& inst = sg.instance();
    const int nl = inst.label_count();
    const int ns = sg.scenario_count();
    const ResolvedSettings rs = resolve_settings(s);

    SolveReport rep;
    rep.setting = s.setting;

    if (s.setting == Setting::Greedy) {
        GreedyResult g = greedy_heuristic(sg);
        rep.incumbent = g.labels;
        rep.ub_exact = g.objective;
        rep.ub = g.objective.value();
        rep.has_incumbent = true;
        rep.has_bounds = false;
        rep.t_s = elapsed();
        return rep;
    }

    SeparatorOptions sopt;
    sopt.extended_seeds = rs.extended_seeds;
    sopt.label_closure = rs.label_closure;
    sopt.violation_tol = s.violation_tol;
    Separator sep(sg, sopt);
    CutTracer tracer(s.trace_path, s.cut_log);
    sep.set_emitter([&tracer](const SeparationResult& r) { tracer(r); });

    MasterLp master(inst, sep.seed_total(), {.prefix_over_budget = true});

    bool plunging = false;
    auto try_incumbent = [&](const std::vector<int>& labels) {
        Rational v = eval_objective(sg, Bitset::of(nl, labels), true);
        if (!rep.has_incumbent || v < rep.ub_exact) {
            rep.has_incumbent = true;
            rep.ub_exact = v;
            rep.incumbent = labels;
            plunging = true;
        }
    };

    std::vector<double> xg(nl, 0.0);
    if (rs.greedy_start) {
        GreedyResult g = greedy_heuristic(sg);
        for (int k : g.labels) xg[k] = 1.0;
        try_incumbent(g.labels);
    }
    if (rs.initial_cuts) {
        const double no_theta = -std::numeric_limits<double>::infinity();
        for (int w = 0; w < ns; ++w) {
            SeparationResult r = sep.separate(w, xg, no_theta, rs.lift);
            if (master.add_cut(r.cut)) ++rep.int_cuts;
        }
    }

    auto ub_val = [&] {
        return rep.has_incumbent ? rep.ub_exact.value()
                                 : std::numeric_limits<double>::infinity();
    };
    auto within_gap = [&](double bound) {
        return rep.has_incumbent && ub_val() - bound <= s.opt_gap * ub_val();
    };

    // open nodes: best-bound heap plus a dive stack filled while plunging
    std::vector<Node> dive;
    using HeapEntry = std::pair<double, long long>;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;
    std::vector<Node> store;
    auto push_node = [&](Node&& nd) {
        if (plunging) {
            dive.push_back(std::move(nd));
        } else {
            heap.emplace(nd.bound, (long long)store.size());
            store.push_back(std::move(nd));
        }
    };
    auto open_min_bound = [&](double extra) {
        double lb = rep.has_incumbent ? ub_val() : std::numeric_limits<double>::infinity();
        lb = std::min(lb, extra);
        if (!heap.empty()) lb = std::min(lb, heap.top().first);
        for (const Node& nd : dive) lb = std::min(lb, nd.bound);
        return lb;
    };

    {
        Node root;
        root.fix.assign(nl, -1);
        root.bound = 0.0;
        heap.emplace(0.0, (long long)store.size());
        store.push_back(std::move(root));
    }

    bool lb0_set = false;
    double final_lb = 0.0;
    bool done = false;
    std::vector<int> order(ns);
    std::vector<int> labels;

    while (!done) {
        // select: dive stack first while plunging, else best bound
        Node node;
        bool from_dive = false;
        if (!dive.empty()) {
            node = std::move(dive.back());
            dive.pop_back();
            from_dive = true;
        } else if (!heap.empty()) {
            auto [bound, id] = heap.top();
            heap.pop();
            node = std::move(store[id]);
            plunging = false;
        } else {
            final_lb = ub_val();
            rep.optimal = rep.has_incumbent;
            break;
        }
        (void)from_dive;

        if (within_gap(node.bound)) continue;
        if (s.time_limit_s > 0 && elapsed() > s.time_limit_s) {
            rep.hit_time_limit = true;
            final_lb = open_min_bound(node.bound);
            break;
        }

        ++rep.nodes;
        const bool is_root = rep.nodes == 1;
        int frac_rounds = 0;
        double node_bound = node.bound;

        for (;;) {
            MasterLp::Result res = master.solve(node.fix);
            if (res.status != LpStatus::Optimal) break;   // infeasible branch
            node_bound = std::max(node_bound, res.objective);
            if (within_gap(node_bound)) {
                if (is_root && !lb0_set) { rep.lb0 = node_bound; lb0_set = true; }
                break;
            }
            if (s.time_limit_s > 0 && elapsed() > s.time_limit_s) {
                rep.hit_time_limit = true;
                break;
            }

            bool integral = true;
            int branch_k = -1;
            double branch_frac = -1.0;
            for (int k = 0; k < nl; ++k) {
                double f = std::fabs(res.x[k] - std::round(res.x[k]));
                if (f > s.int_tol) {
                    integral = false;
                    if (f > branch_frac + 1e-12) {
                        branch_frac = f;
                        branch_k = k;
                    }
                }
            }

            if (integral) {
                // full-scan separation regardless of tau
                int added = 0;
                if (rs.lp_separation) {
                    for (int w = 0; w < ns; ++w) order[w] = w;
                    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                        if (res.theta[a] != res.theta[b]) return res.theta[a] < res.theta[b];
                        return a < b;
                    });
                    for (int w : order) {
                        SeparationResult r = sep.separate_lp_abf(w, res.x, res.theta[w]);
                        if (r.violated && master.add_cut(r.cut)) ++added;
                    }
                } else {
                    for (auto& r : sep.cut_sampling(res.theta, res.x, rs.lift, 1.0))
                        if (master.add_cut(r.cut)) ++added;
                }
                if (added > 0) {
                    rep.int_cuts += added;
                    continue;
                }
                labels.clear();
                for (int k = 0; k < nl; ++k)
                    if (res.x[k] > 0.5) labels.push_back(k);
                try_incumbent(labels);
                if (is_root && !lb0_set) { rep.lb0 = node_bound; lb0_set = true; }
                break;
            }

            if (rs.fractional_separation && frac_rounds < s.max_frac_rounds_per_node) {
                ++frac_rounds;
                int added = 0;
                for (auto& r : sep.cut_sampling(res.theta, res.x, rs.lift, rs.tau))
                    if (master.add_cut(r.cut)) ++added;
                if (added > 0) {
                    rep.frac_cuts += added;
                    continue;
                }
            }

            // branch on the most fractional label, blocking branch first
            if (is_root && !lb0_set) { rep.lb0 = node_bound; lb0_set = true; }
            Node child0, child1;
            child0.fix = node.fix;
            child0.fix[branch_k] = 0;
            child0.bound = node_bound;
            child1.fix = std::move(node.fix);
            child1.fix[branch_k] = 1;
            child1.bound = node_bound;
            push_node(std::move(child0));
            push_node(std::move(child1));
            break;
        }
        if (rep.hit_time_limit) {
            final_lb = open_min_bound(node_bound);
            break;
        }
    }

    if (!rep.hit_time_limit && !done) {
        // loop left via break with optimality decided above; nothing to do
    }
    if (!rep.hit_time_limit && !rep.optimal) {
        // terminated because every open node fell within the gap
        if (rep.has_incumbent) {
            final_lb = std::max(final_lb, open_min_bound(ub_val()));
            rep.optimal = true;
        }
    }

    rep.ub = ub_val();
    rep.lb = std::min(final_lb, rep.ub);
    rep.gap = rep.has_incumbent && rep.ub > 0 ? (rep.ub - rep.lb) / rep.ub
              : rep.has_incumbent             ? 0.0
                                              : std::numeric_limits<double>::infinity();
    if (!lb0_set) rep.lb0 = rep.lb;
    rep.t_s = elapsed();
    return rep;
}

} // namespace sbm
