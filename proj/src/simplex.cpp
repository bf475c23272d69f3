#include "sbm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace sbm {

namespace {

enum NbState : char { kAtLower, kAtUpper, kFreeZero };

class Simplex {
public:
    Simplex(const LpProblem& p, const SimplexOptions& opt) : p_(p), opt_(opt) {
        m_ = int(p.rows.size());
        n_struct_ = p.num_vars;
        n_ = n_struct_ + m_;       // + slacks
        ntot_ = n_ + m_;           // + artificials
        lo_.assign(ntot_, 0.0);
        up_.assign(ntot_, 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            lo_[j] = p.lower[j];
            up_[j] = p.upper[j];
        }
        for (int i = 0; i < m_; ++i) {
            switch (p.rows[i].sense) {
                case 'L': lo_[n_struct_ + i] = 0.0;     up_[n_struct_ + i] = kLpInf; break;
                case 'G': lo_[n_struct_ + i] = -kLpInf; up_[n_struct_ + i] = 0.0;    break;
                default:  lo_[n_struct_ + i] = 0.0;     up_[n_struct_ + i] = 0.0;    break;
            }
        }
        for (int i = 0; i < m_; ++i) {
            lo_[n_ + i] = 0.0;
            up_[n_ + i] = kLpInf;
        }
    }

    LpSolution run() {
        build_initial();
        long long iter_cap = opt_.max_iters > 0
                                 ? opt_.max_iters
                                 : 20000 + 100LL * (m_ + ntot_);

        // phase 1: drive artificials to zero (bounded below, so anything
        // but Optimal is a numeric failure)
        set_phase_costs(true);
        LpStatus st = optimize(iter_cap);
        if (st != LpStatus::Optimal) return finish(LpStatus::IterLimit);
        double scale = 1.0;
        for (int i = 0; i < m_; ++i) scale = std::max(scale, std::fabs(p_.rows[i].rhs));
        if (phase_objective(true) > opt_.tol_feas * scale * (m_ + 1))
            return finish(LpStatus::Infeasible);
        freeze_artificials();

        set_phase_costs(false);
        st = optimize(iter_cap);
        return finish(st);
    }

private:
    void build_initial() {
        val_.assign(ntot_, 0.0);
        state_.assign(ntot_, kAtLower);
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lo_[j])) {
                state_[j] = kAtLower;
                val_[j] = lo_[j];
            } else if (std::isfinite(up_[j])) {
                state_[j] = kAtUpper;
                val_[j] = up_[j];
            } else {
                state_[j] = kFreeZero;
                val_[j] = 0.0;
            }
        }

        // residuals with every structural and slack at its initial value
        std::vector<double> resid(m_);
        for (int i = 0; i < m_; ++i) {
            double r = p_.rows[i].rhs;
            for (auto [j, a] : p_.rows[i].terms) r -= a * val_[j];
            r -= val_[n_struct_ + i];   // slack starts at 0 anyway
            resid[i] = r;
        }

        // tableau with basis = artificials: row i scaled so the artificial
        // column is +1 and its value |resid| is nonnegative
        tab_.assign(size_t(m_) * ntot_, 0.0);
        xb_.assign(m_, 0.0);
        basic_.assign(m_, 0);
        in_basis_.assign(ntot_, 0);
        for (int i = 0; i < m_; ++i) {
            double sgn = resid[i] >= 0 ? 1.0 : -1.0;
            double* row = &tab_[size_t(i) * ntot_];
            for (auto [j, a] : p_.rows[i].terms) row[j] += sgn * a;
            row[n_struct_ + i] = sgn;
            row[n_ + i] = 1.0;
            xb_[i] = std::fabs(resid[i]);
            basic_[i] = n_ + i;
            in_basis_[n_ + i] = 1;
        }
    }

    void set_phase_costs(bool phase1) {
        cost_.assign(ntot_, 0.0);
        if (phase1) {
            for (int i = 0; i < m_; ++i) cost_[n_ + i] = 1.0;
        } else {
            for (int j = 0; j < n_struct_; ++j) cost_[j] = p_.obj[j];
        }
        // reduced costs d = c - c_B^T tab
        d_.assign(cost_.begin(), cost_.end());
        for (int i = 0; i < m_; ++i) {
            double cb = cost_[basic_[i]];
            if (cb == 0.0) continue;
            const double* row = &tab_[size_t(i) * ntot_];
            for (int j = 0; j < ntot_; ++j) d_[j] -= cb * row[j];
        }
    }

    double phase_objective(bool phase1) const {
        double obj = 0.0;
        for (int i = 0; i < m_; ++i)
            obj += (phase1 ? (basic_[i] >= n_ ? 1.0 : 0.0) : cost_[basic_[i]]) * xb_[i];
        if (!phase1)
            for (int j = 0; j < ntot_; ++j)
                if (!in_basis_[j]) obj += cost_[j] * val_[j];
        return obj;
    }

    // after phase 1: artificials may not re-enter; pivot basic ones out
    // where a usable column exists, else their row is redundant
    void freeze_artificials() {
        for (int i = 0; i < m_; ++i) up_[n_ + i] = 0.0;
        for (int i = 0; i < m_; ++i) {
            if (basic_[i] < n_) continue;
            const double* row = &tab_[size_t(i) * ntot_];
            int piv = -1;
            double best = opt_.tol_pivot;
            for (int j = 0; j < n_; ++j) {
                if (in_basis_[j]) continue;
                if (std::fabs(row[j]) > best) {
                    best = std::fabs(row[j]);
                    piv = j;
                }
            }
            if (piv >= 0) pivot(i, piv, val_[piv]);
        }
    }

    LpStatus optimize(long long iter_cap) {
        int degen_run = 0;
        bool bland = false;
        const int degen_threshold = 2 * (m_ + ntot_) + 100;
        for (long long it = 0; it < iter_cap; ++it) {
            int j_in = pick_entering(bland);
            if (j_in < 0) return LpStatus::Optimal;
            double sigma = entering_direction(j_in);

            // ratio test over the entering column
            double t_max = kLpInf;
            int r_leave = -1;           // -1 with finite t_max: bound flip
            double leave_to = 0.0;      // bound the leaving basic hits
            double span = up_[j_in] - lo_[j_in];
            if (std::isfinite(span)) t_max = span;
            for (int i = 0; i < m_; ++i) {
                double w = sigma * tab_[size_t(i) * ntot_ + j_in];
                if (std::fabs(w) <= opt_.tol_pivot) continue;
                int jb = basic_[i];
                double t_i, hit;
                if (w > 0) {
                    if (!std::isfinite(lo_[jb])) continue;
                    t_i = (xb_[i] - lo_[jb]) / w;
                    hit = lo_[jb];
                } else {
                    if (!std::isfinite(up_[jb])) continue;
                    t_i = (up_[jb] - xb_[i]) / (-w);
                    hit = up_[jb];
                }
                if (t_i < -1e-12) t_i = 0.0;
                bool better = t_i < t_max - 1e-12;
                bool tie = !better && t_i < t_max + 1e-12 && r_leave >= 0;
                // ties: Bland takes the smallest basic index, else the
                // largest pivot magnitude for stability
                if (tie) {
                    double cur = std::fabs(tab_[size_t(r_leave) * ntot_ + j_in]);
                    double cand = std::fabs(tab_[size_t(i) * ntot_ + j_in]);
                    if (bland ? jb < basic_[r_leave] : cand > cur) better = true;
                }
                if (better) {
                    t_max = std::min(t_max, std::max(t_i, 0.0));
                    r_leave = i;
                    leave_to = hit;
                }
            }
            if (!std::isfinite(t_max)) return LpStatus::Unbounded;

            if (t_max <= 1e-11) {
                if (++degen_run > degen_threshold) bland = true;
            } else {
                degen_run = 0;
            }

            // update basic values along the step
            if (t_max > 0) {
                for (int i = 0; i < m_; ++i) {
                    double w = sigma * tab_[size_t(i) * ntot_ + j_in];
                    if (w != 0.0) xb_[i] -= w * t_max;
                }
            }
            double new_val = val_[j_in] + sigma * t_max;
            if (r_leave < 0) {
                // entering flips to its opposite bound
                val_[j_in] = new_val;
                state_[j_in] = (state_[j_in] == kAtLower) ? kAtUpper : kAtLower;
            } else {
                int j_out = basic_[r_leave];
                val_[j_out] = leave_to;
                state_[j_out] = std::isfinite(up_[j_out]) && leave_to == up_[j_out]
                                    ? kAtUpper
                                    : kAtLower;
                pivot(r_leave, j_in, new_val);
            }
        }
        return LpStatus::IterLimit;
    }

    int pick_entering(bool bland) const {
        int best = -1;
        double best_viol = opt_.tol_cost;
        for (int j = 0; j < ntot_; ++j) {
            if (in_basis_[j]) continue;
            if (lo_[j] == up_[j]) continue;   // fixed (includes frozen artificials)
            double viol = 0.0;
            if (state_[j] == kAtLower || state_[j] == kFreeZero) {
                if (d_[j] < -opt_.tol_cost) viol = -d_[j];
            }
            if (viol == 0.0 && (state_[j] == kAtUpper || state_[j] == kFreeZero)) {
                if (d_[j] > opt_.tol_cost) viol = d_[j];
            }
            if (viol > best_viol) {
                best_viol = viol;
                best = j;
                if (bland) break;   // smallest index wins
            }
        }
        return best;
    }

    double entering_direction(int j) const {
        if (state_[j] == kAtUpper) return -1.0;
        if (state_[j] == kAtLower) return 1.0;
        return d_[j] < 0 ? 1.0 : -1.0;   // free: move against the gradient
    }

    void pivot(int r, int j_in, double enter_val) {
        double* prow = &tab_[size_t(r) * ntot_];
        double p = prow[j_in];
        double inv = 1.0 / p;
        for (int j = 0; j < ntot_; ++j) prow[j] *= inv;
        prow[j_in] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* row = &tab_[size_t(i) * ntot_];
            double f = row[j_in];
            if (f == 0.0) continue;
            for (int j = 0; j < ntot_; ++j) row[j] -= f * prow[j];
            row[j_in] = 0.0;
        }
        double fd = d_[j_in];
        if (fd != 0.0) {
            for (int j = 0; j < ntot_; ++j) d_[j] -= fd * prow[j];
            d_[j_in] = 0.0;
        }
        in_basis_[basic_[r]] = 0;
        in_basis_[j_in] = 1;
        basic_[r] = j_in;
        xb_[r] = enter_val;
    }

    LpSolution finish(LpStatus st) {
        LpSolution sol;
        sol.status = st;
        if (st != LpStatus::Optimal) return sol;
        sol.x.assign(n_struct_, 0.0);
        for (int j = 0; j < n_struct_; ++j) sol.x[j] = val_[j];
        for (int i = 0; i < m_; ++i)
            if (basic_[i] < n_struct_) sol.x[basic_[i]] = xb_[i];
        double obj = 0.0;
        for (int j = 0; j < n_struct_; ++j) obj += p_.obj[j] * sol.x[j];
        sol.objective = obj;
        return sol;
    }

    const LpProblem& p_;
    SimplexOptions opt_;
    int m_, n_struct_, n_, ntot_;
    std::vector<double> lo_, up_, val_, cost_, d_, tab_, xb_;
    std::vector<int> basic_;
    std::vector<char> in_basis_, state_;
};

} // namespace

LpSolution solve_lp(const LpProblem& p, const SimplexOptions& opt) {
    if (p.rows.empty()) {
        // pure bound problem
        LpSolution sol;
        sol.x.assign(p.num_vars, 0.0);
        double obj = 0.0;
        for (int j = 0; j < p.num_vars; ++j) {
            double v;
            if (p.obj[j] > 0)
                v = p.lower[j];
            else if (p.obj[j] < 0)
                v = p.upper[j];
            else
                v = std::isfinite(p.lower[j]) ? p.lower[j] : 0.0;
            if (!std::isfinite(v)) {
                sol.status = LpStatus::Unbounded;
                return sol;
            }
            if (p.lower[j] > p.upper[j]) {
                sol.status = LpStatus::Infeasible;
                return sol;
            }
            sol.x[j] = v;
            obj += p.obj[j] * v;
        }
        sol.status = LpStatus::Optimal;
        sol.objective = obj;
        return sol;
    }
    Simplex s(p, opt);
    return s.run();
}

} // namespace sbm
