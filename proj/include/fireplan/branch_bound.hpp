#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

#include "fireplan/milp.hpp"
#include "fireplan/simplex.hpp"

// Exact branch-and-bound over LP relaxations: DFS with warm dual-simplex
// restarts, most-fractional branching with ties broken by lowest label, and
// per-node pruning against the incumbent. Deterministic given the model and
// sufficient budget.

namespace fireplan {

struct SolveLimits {
    double time_limit_s = -1.0;   // < 0: unlimited
    std::int64_t node_limit = -1; // < 0: unlimited
};

constexpr double kIntTol = 1e-6;

inline Solution solve_exact(const MilpModel& model, SolveLimits limits = {}) {
    model.validate();

    LpProblem lp;
    lp.num_vars = static_cast<int>(model.vars.size());
    lp.c.resize(model.vars.size());
    lp.lb.resize(model.vars.size());
    lp.ub.resize(model.vars.size());
    for (size_t j = 0; j < model.vars.size(); ++j) {
        lp.c[j] = -model.objective[j]; // engine minimizes
        lp.lb[j] = model.vars[j].lb;
        lp.ub[j] = model.vars[j].ub;
    }
    for (const auto& c : model.cons) {
        LpRow row;
        row.terms = c.terms;
        row.sense = (c.sense == ConSense::le) ? '<' : (c.sense == ConSense::ge) ? '>' : '=';
        row.rhs = c.rhs;
        lp.rows.push_back(std::move(row));
    }

    std::vector<int> int_vars;
    for (size_t j = 0; j < model.vars.size(); ++j)
        if (model.is_integral_kind(static_cast<int>(j))) int_vars.push_back(static_cast<int>(j));

    // label rank for deterministic branching ties
    std::vector<int> order(model.vars.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return model.vars[static_cast<size_t>(a)].label < model.vars[static_cast<size_t>(b)].label; });
    std::vector<int> label_rank(model.vars.size());
    for (size_t k = 0; k < order.size(); ++k) label_rank[static_cast<size_t>(order[k])] = static_cast<int>(k);

    SimplexEngine engine(lp);

    Solution best;
    best.status = SolveStatus::infeasible;
    double best_obj = -kLpInf;
    bool truncated = false;
    double open_bound = -kLpInf;
    std::int64_t nodes = 0;

    const auto start = std::chrono::steady_clock::now();
    auto out_of_budget = [&]() {
        if (limits.node_limit >= 0 && nodes >= limits.node_limit) return true;
        if (limits.time_limit_s >= 0.0) {
            double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (el >= limits.time_limit_s) return true;
        }
        return false;
    };

    std::function<void()> dfs = [&]() {
        if (out_of_budget()) {
            truncated = true;
            return;
        }
        ++nodes;
        LpStatus st = engine.solve();
        if (st == LpStatus::iteration_limit) {
            engine.rebuild();
            st = engine.solve();
            if (st == LpStatus::iteration_limit)
                throw std::runtime_error("builtin solver: simplex failed to converge");
        }
        if (st == LpStatus::infeasible) return;
        if (engine.primal_residual() > 1e-6) {
            engine.rebuild();
            if (engine.solve() == LpStatus::infeasible) return;
        }
        const double lp_obj = -engine.objective(); // maximization value
        if (lp_obj <= best_obj + 1e-9) return;

        std::vector<double> x = engine.solution();
        int branch_var = -1;
        double branch_score = kIntTol;
        for (int j : int_vars) {
            double v = x[static_cast<size_t>(j)];
            double f = v - std::floor(v);
            double score = std::min(f, 1.0 - f);
            if (score > branch_score + 1e-12 ||
                (score > kIntTol && branch_var >= 0 && std::abs(score - branch_score) <= 1e-12 &&
                 label_rank[static_cast<size_t>(j)] < label_rank[static_cast<size_t>(branch_var)])) {
                branch_var = j;
                branch_score = score;
            }
        }

        if (branch_var < 0) {
            // integral: snap and recompute the objective from snapped values
            for (int j : int_vars) x[static_cast<size_t>(j)] = std::round(x[static_cast<size_t>(j)]);
            double obj = 0.0;
            for (size_t j = 0; j < x.size(); ++j) obj += model.objective[j] * x[j];
            if (obj > best_obj) {
                best_obj = obj;
                best.values = x;
                best.objective = obj;
                best.incumbent_history.push_back(obj);
            }
            return;
        }

        const double v = x[static_cast<size_t>(branch_var)];
        const double frac = v - std::floor(v);
        const double old_lb = engine.var_lb(branch_var);
        const double old_ub = engine.var_ub(branch_var);
        struct Child {
            double lb, ub;
        };
        Child down{old_lb, std::floor(v)};
        Child up{std::ceil(v), old_ub};
        Child first = (frac >= 0.5) ? up : down;
        Child second = (frac >= 0.5) ? down : up;
        for (const Child& ch : {first, second}) {
            if (ch.lb > ch.ub + 1e-12) continue;
            if (truncated) {
                open_bound = std::max(open_bound, lp_obj);
                break;
            }
            engine.set_var_bounds(branch_var, ch.lb, ch.ub);
            dfs();
            engine.set_var_bounds(branch_var, old_lb, old_ub);
        }
        if (truncated) open_bound = std::max(open_bound, lp_obj);
    };

    dfs();

    best.nodes = nodes;
    if (best_obj > -kLpInf) {
        best.status = truncated ? SolveStatus::feasible : SolveStatus::optimal;
        best.bound = truncated ? std::max(best_obj, open_bound) : best_obj;
    } else {
        best.status = truncated ? SolveStatus::time_limit : SolveStatus::infeasible;
        best.bound = truncated ? open_bound : -kLpInf;
        best.objective = 0.0;
    }
    return best;
}

} // namespace fireplan
