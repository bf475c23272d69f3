#include "sbm/master.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace sbm {

namespace {

uint64_t fnv64(uint64_t h, uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xFF;
        h *= 0x100000001B3ull;
    }
    return h;
}

uint64_t cut_key(const BendersCut& c) {
    uint64_t h = 0xCBF29CE484222325ull;
    h = fnv64(h, uint64_t(c.scenario));
    uint64_t bits;
    std::memcpy(&bits, &c.constant, 8);
    h = fnv64(h, bits);
    for (double v : c.coeff) {
        std::memcpy(&bits, &v, 8);
        h = fnv64(h, bits);
    }
    return h;
}

} // namespace

MasterLp::MasterLp(const Instance& inst, long long seed_total, Options opt)
    : inst_(&inst), seed_total_(seed_total), opt_(opt) {
    const int nl = inst.label_count();
    base_ub_.assign(nl, 1.0);
    for (int k = 0; k < nl; ++k)
        if (inst.unblockable(k) || (opt_.prefix_over_budget && inst.costs[k] > inst.budget))
            base_ub_[k] = 0.0;
    in_working_.clear();
}

bool MasterLp::add_cut(const BendersCut& cut) {
    uint64_t key = cut_key(cut);
    if (!dedup_.insert(key).second) return false;
    cuts_.push_back(cut);
    in_working_.push_back(0);
    return true;
}

MasterLp::Result MasterLp::solve(const std::vector<int8_t>& fix) {
    const Instance& inst = *inst_;
    const int nl = inst.label_count();
    const int ns = inst.scenarios.count();

    Result res;
    // bounds under the branching fixation
    std::vector<double> lo(nl, 0.0), up(nl, 1.0);
    for (int k = 0; k < nl; ++k) {
        up[k] = base_ub_[k];
        if (fix[k] == 0) up[k] = 0.0;
        if (fix[k] == 1) lo[k] = 1.0;
        if (lo[k] > up[k]) return res;   // fixed to 1 but unavailable
    }

    // compact an oversized working set down to the last binding rows
    const size_t cap = std::max<size_t>(256, size_t(4) * ns + 16);
    if (working_.size() > cap) {
        std::fill(in_working_.begin(), in_working_.end(), 0);
        working_ = last_binding_;
        for (int i : working_) in_working_[i] = 1;
    }

    for (;;) {
        LpProblem lp;
        for (int k = 0; k < nl; ++k) lp.add_var(lo[k], up[k], 0.0);
        for (int w = 0; w < ns; ++w) lp.add_var(0.0, kLpInf, 1.0);

        std::vector<std::pair<int, double>> budget;
        for (int k = 0; k < nl; ++k)
            if (!inst.unblockable(k) && inst.costs[k] != 0.0)
                budget.emplace_back(k, inst.costs[k]);
        if (!budget.empty()) lp.add_row(std::move(budget), 'L', inst.budget);

        for (int ci : working_) {
            const BendersCut& c = cuts_[ci];
            std::vector<std::pair<int, double>> terms;
            terms.emplace_back(nl + c.scenario, 1.0);
            for (int k = 0; k < nl; ++k)
                if (c.coeff[k] != 0.0) terms.emplace_back(k, c.coeff[k]);
            lp.add_row(std::move(terms), 'G', c.constant);
        }

        LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::Optimal) {
            res.status = sol.status;
            return res;
        }

        // the working-set optimum is optimal for the whole pool once no
        // pooled cut is violated: it is then pool-feasible with the
        // objective of a relaxation
        bool grew = false;
        for (size_t i = 0; i < cuts_.size(); ++i) {
            if (in_working_[i]) continue;
            const BendersCut& c = cuts_[i];
            double val = c.constant;
            for (int k = 0; k < nl; ++k)
                if (c.coeff[k] != 0.0) val -= c.coeff[k] * sol.x[k];
            if (val > sol.x[nl + c.scenario] + opt_.pool_feas_tol * (1.0 + std::fabs(c.constant))) {
                working_.push_back(int(i));
                in_working_[i] = 1;
                grew = true;
            }
        }
        if (grew) continue;

        last_binding_.clear();
        for (size_t wi = 0; wi < working_.size(); ++wi) {
            const BendersCut& c = cuts_[working_[wi]];
            double val = c.constant;
            for (int k = 0; k < nl; ++k)
                if (c.coeff[k] != 0.0) val -= c.coeff[k] * sol.x[k];
            if (sol.x[nl + c.scenario] - val <= 1e-7 * (1.0 + std::fabs(c.constant)))
                last_binding_.push_back(working_[wi]);
        }

        res.status = LpStatus::Optimal;
        res.x.assign(sol.x.begin(), sol.x.begin() + nl);
        res.theta.assign(sol.x.begin() + nl, sol.x.begin() + nl + ns);
        double theta_sum = 0.0;
        for (double t : res.theta) theta_sum += t;
        res.objective = (double(seed_total_) + theta_sum) / double(ns);
        return res;
    }
}

} // namespace sbm
