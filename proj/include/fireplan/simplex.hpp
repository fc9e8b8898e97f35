#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

// Bounded-variable dual simplex on a dense tableau. All structural variables
// must carry finite bounds, which makes a dual-feasible start available from
// the slack basis under any objective; branch-and-bound then warm-restarts the
// same engine after bound changes with a handful of dual pivots per node.

namespace fireplan {

constexpr double kLpInf = std::numeric_limits<double>::infinity();

struct LpRow {
    std::vector<std::pair<int, double>> terms; // (var index, coefficient)
    char sense = '<';                          // '<', '=', '>'
    double rhs = 0.0;
};

// Minimization problem; callers negate to maximize.
struct LpProblem {
    int num_vars = 0;
    std::vector<double> c;
    std::vector<double> lb, ub;
    std::vector<LpRow> rows;
};

enum class LpStatus { optimal, infeasible, iteration_limit };

class SimplexEngine {
public:
    explicit SimplexEngine(const LpProblem& p) : prob_(p) {
        n_ = p.num_vars;
        m_ = static_cast<int>(p.rows.size());
        for (int j = 0; j < n_; ++j)
            if (!std::isfinite(p.lb[static_cast<size_t>(j)]) || !std::isfinite(p.ub[static_cast<size_t>(j)]))
                throw std::invalid_argument("simplex: structural variables must have finite bounds");
        ncols_ = n_ + m_ + 1; // structurals, slacks, rhs
        const double bytes = static_cast<double>(m_) * ncols_ * 8.0;
        if (bytes > 2.0e9) throw std::invalid_argument("simplex: model too large for the dense builtin solver");
        lb_.assign(static_cast<size_t>(n_ + m_), 0.0);
        ub_.assign(static_cast<size_t>(n_ + m_), 0.0);
        for (int j = 0; j < n_; ++j) {
            lb_[static_cast<size_t>(j)] = p.lb[static_cast<size_t>(j)];
            ub_[static_cast<size_t>(j)] = p.ub[static_cast<size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            switch (p.rows[static_cast<size_t>(i)].sense) {
                case '<': lb_[static_cast<size_t>(n_ + i)] = 0.0; ub_[static_cast<size_t>(n_ + i)] = kLpInf; break;
                case '>': lb_[static_cast<size_t>(n_ + i)] = -kLpInf; ub_[static_cast<size_t>(n_ + i)] = 0.0; break;
                case '=': lb_[static_cast<size_t>(n_ + i)] = 0.0; ub_[static_cast<size_t>(n_ + i)] = 0.0; break;
                default: throw std::invalid_argument("simplex: bad row sense");
            }
        }
        rebuild();
    }

    void set_var_bounds(int j, double lo, double hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("simplex: non-finite bound");
        lb_[static_cast<size_t>(j)] = lo;
        ub_[static_cast<size_t>(j)] = hi;
        if (pos_[static_cast<size_t>(j)] != Pos::basic) place_nonbasic(j);
        xb_stale_ = true;
    }

    double var_lb(int j) const { return lb_[static_cast<size_t>(j)]; }
    double var_ub(int j) const { return ub_[static_cast<size_t>(j)]; }

    // Cold restart: slack basis, dual-feasible placement of all structurals.
    void rebuild() {
        tab_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
        for (int i = 0; i < m_; ++i) {
            double* row = tab_row(i);
            for (const auto& [j, v] : prob_.rows[static_cast<size_t>(i)].terms) row[j] += v;
            row[n_ + i] = 1.0;
            row[ncols_ - 1] = prob_.rows[static_cast<size_t>(i)].rhs;
        }
        d_.assign(static_cast<size_t>(n_ + m_), 0.0);
        for (int j = 0; j < n_; ++j) d_[static_cast<size_t>(j)] = prob_.c[static_cast<size_t>(j)];
        basic_.resize(static_cast<size_t>(m_));
        pos_.assign(static_cast<size_t>(n_ + m_), Pos::at_lower);
        for (int i = 0; i < m_; ++i) {
            basic_[static_cast<size_t>(i)] = n_ + i;
            pos_[static_cast<size_t>(n_ + i)] = Pos::basic;
        }
        for (int j = 0; j < n_; ++j) place_nonbasic(j);
        xb_stale_ = true;
    }

    LpStatus solve(std::int64_t max_iters = -1) {
        if (max_iters < 0) max_iters = 20000 + 200LL * m_;
        if (xb_stale_) recompute_xb();
        int stalled = 0;
        for (std::int64_t iter = 0; iter < max_iters; ++iter) {
            const bool bland = stalled > 400;
            // leaving row: most violated basic variable
            int r = -1;
            double worst = feas_tol_;
            for (int i = 0; i < m_; ++i) {
                const int bj = basic_[static_cast<size_t>(i)];
                double v = xb_[static_cast<size_t>(i)];
                double viol = 0.0;
                if (v < lb_[static_cast<size_t>(bj)] - feas_tol_) viol = lb_[static_cast<size_t>(bj)] - v;
                else if (v > ub_[static_cast<size_t>(bj)] + feas_tol_) viol = v - ub_[static_cast<size_t>(bj)];
                if (viol > worst || (bland && viol > feas_tol_)) {
                    worst = viol;
                    r = i;
                    if (bland) break;
                }
            }
            if (r < 0) {
                if ((iter & 0x3f) == 0) recompute_xb(); // guard against drift before declaring optimal
                r = -1;
                worst = feas_tol_;
                for (int i = 0; i < m_; ++i) {
                    const int bj = basic_[static_cast<size_t>(i)];
                    double v = xb_[static_cast<size_t>(i)];
                    double viol = 0.0;
                    if (v < lb_[static_cast<size_t>(bj)] - feas_tol_) viol = lb_[static_cast<size_t>(bj)] - v;
                    else if (v > ub_[static_cast<size_t>(bj)] + feas_tol_) viol = v - ub_[static_cast<size_t>(bj)];
                    if (viol > worst) {
                        worst = viol;
                        r = i;
                    }
                }
                if (r < 0) return LpStatus::optimal;
            }
            const int leave = basic_[static_cast<size_t>(r)];
            const double xr = xb_[static_cast<size_t>(r)];
            const bool above = xr > ub_[static_cast<size_t>(leave)];
            const double target = above ? ub_[static_cast<size_t>(leave)] : lb_[static_cast<size_t>(leave)];
            const double* row = tab_row(r);

            // dual ratio test
            int e = -1;
            double best_ratio = 0.0, best_alpha = 0.0;
            for (int j = 0; j < n_ + m_; ++j) {
                if (pos_[static_cast<size_t>(j)] == Pos::basic) continue;
                if (lb_[static_cast<size_t>(j)] >= ub_[static_cast<size_t>(j)] - 1e-12 &&
                    std::isfinite(lb_[static_cast<size_t>(j)]) && std::isfinite(ub_[static_cast<size_t>(j)]))
                    continue; // fixed
                const double a = row[j];
                if (std::abs(a) < pivot_tol_) continue;
                const bool at_lower = pos_[static_cast<size_t>(j)] == Pos::at_lower;
                bool eligible = above ? (at_lower ? a > 0.0 : a < 0.0) : (at_lower ? a < 0.0 : a > 0.0);
                if (!eligible) continue;
                const double ratio = d_[static_cast<size_t>(j)] / a;
                if (e < 0 || (above ? ratio < best_ratio - 1e-9 : ratio > best_ratio + 1e-9) ||
                    (std::abs(ratio - best_ratio) <= 1e-9 &&
                     (bland ? j < e : std::abs(a) > best_alpha))) {
                    e = j;
                    best_ratio = ratio;
                    best_alpha = std::abs(a);
                    if (bland && std::abs(ratio) <= 1e-9) break;
                }
            }
            if (e < 0) return LpStatus::infeasible;

            const double piv = row[e];
            const double delta = xr - target;        // amount the leaving variable moves
            const double step = delta / piv;         // change of the entering variable
            const double de = d_[static_cast<size_t>(e)];
            if (std::abs(step) <= 1e-12 && std::abs(de / piv) <= 1e-12) ++stalled;
            else stalled = 0;

            // primal update
            double xe = nonbasic_value(e) + step;
            double* prow = tab_row(r);
            const double inv = 1.0 / piv;
            for (int k = 0; k < ncols_; ++k) prow[k] *= inv;
            prow[e] = 1.0;
            for (int i = 0; i < m_; ++i) {
                if (i == r) continue;
                double* irow = tab_row(i);
                const double f = irow[e];
                if (std::abs(f) < 1e-12) continue;
                for (int k = 0; k < ncols_; ++k) irow[k] -= f * prow[k];
                irow[e] = 0.0;
                xb_[static_cast<size_t>(i)] -= step * f;
            }
            if (std::abs(de) > 0.0) {
                for (int k = 0; k < n_ + m_; ++k) d_[static_cast<size_t>(k)] -= de * prow[k];
            }
            d_[static_cast<size_t>(e)] = 0.0;

            pos_[static_cast<size_t>(leave)] = above ? Pos::at_upper : Pos::at_lower;
            pos_[static_cast<size_t>(e)] = Pos::basic;
            basic_[static_cast<size_t>(r)] = e;
            xb_[static_cast<size_t>(r)] = xe;

            if ((iter & 0xff) == 0xff) recompute_xb();
        }
        return LpStatus::iteration_limit;
    }

    double objective() const {
        double obj = 0.0;
        for (int j = 0; j < n_; ++j) obj += prob_.c[static_cast<size_t>(j)] * value(j);
        return obj;
    }

    double value(int j) const {
        if (pos_[static_cast<size_t>(j)] == Pos::basic) {
            for (int i = 0; i < m_; ++i)
                if (basic_[static_cast<size_t>(i)] == j) return xb_[static_cast<size_t>(i)];
        }
        return nonbasic_value(j);
    }

    std::vector<double> solution() const {
        std::vector<double> x(static_cast<size_t>(n_), 0.0);
        std::vector<int> row_of(static_cast<size_t>(n_ + m_), -1);
        for (int i = 0; i < m_; ++i) row_of[static_cast<size_t>(basic_[static_cast<size_t>(i)])] = i;
        for (int j = 0; j < n_; ++j)
            x[static_cast<size_t>(j)] = row_of[static_cast<size_t>(j)] >= 0
                                            ? xb_[static_cast<size_t>(row_of[static_cast<size_t>(j)])]
                                            : nonbasic_value(j);
        return x;
    }

    // Max violation of the original rows at the current solution.
    double primal_residual() const {
        std::vector<double> x = solution();
        double worst = 0.0;
        for (const auto& row : prob_.rows) {
            double lhs = 0.0;
            for (const auto& [j, v] : row.terms) lhs += v * x[static_cast<size_t>(j)];
            double viol = 0.0;
            if (row.sense == '<') viol = lhs - row.rhs;
            else if (row.sense == '>') viol = row.rhs - lhs;
            else viol = std::abs(lhs - row.rhs);
            worst = std::max(worst, viol);
        }
        return worst;
    }

private:
    enum class Pos : std::uint8_t { basic, at_lower, at_upper };

    double* tab_row(int i) { return tab_.data() + static_cast<size_t>(i) * ncols_; }
    const double* tab_row(int i) const { return tab_.data() + static_cast<size_t>(i) * ncols_; }

    double nonbasic_value(int j) const {
        return pos_[static_cast<size_t>(j)] == Pos::at_upper ? ub_[static_cast<size_t>(j)]
                                                             : lb_[static_cast<size_t>(j)];
    }

    // Choose the bound that keeps the reduced-cost sign dual feasible.
    void place_nonbasic(int j) {
        const bool lo_fin = std::isfinite(lb_[static_cast<size_t>(j)]);
        const bool hi_fin = std::isfinite(ub_[static_cast<size_t>(j)]);
        if (d_[static_cast<size_t>(j)] >= 0.0)
            pos_[static_cast<size_t>(j)] = lo_fin ? Pos::at_lower : Pos::at_upper;
        else
            pos_[static_cast<size_t>(j)] = hi_fin ? Pos::at_upper : Pos::at_lower;
    }

    void recompute_xb() {
        xb_.assign(static_cast<size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) xb_[static_cast<size_t>(i)] = tab_row(i)[ncols_ - 1];
        for (int j = 0; j < n_ + m_; ++j) {
            if (pos_[static_cast<size_t>(j)] == Pos::basic) continue;
            const double xj = nonbasic_value(j);
            if (xj == 0.0) continue;
            for (int i = 0; i < m_; ++i) {
                const double t = tab_row(i)[j];
                if (t != 0.0) xb_[static_cast<size_t>(i)] -= t * xj;
            }
        }
        xb_stale_ = false;
    }

    LpProblem prob_;
    int n_ = 0, m_ = 0, ncols_ = 0;
    std::vector<double> tab_;
    std::vector<double> d_;
    std::vector<double> lb_, ub_;
    std::vector<double> xb_;
    std::vector<int> basic_;
    std::vector<Pos> pos_;
    bool xb_stale_ = true;
    double feas_tol_ = 1e-7;
    double pivot_tol_ = 1e-7;
};

} // namespace fireplan
