#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "fireplan/core.hpp"

// Piecewise elliptical fire growth. The fire front is an axis-aligned ellipse
// centered at the ignition point whose semi-axes grow at per-phase velocities;
// axes are continuous across phase changes. A scenario is one schedule of
// phases (phase 1 is common to all scenarios, the wind change starts the
// scenario's second phase at its occurrence time).

namespace fireplan {

struct FirePhase {
    double start = 0.0; // hours; first phase starts at 0
    double vx = 0.0;    // km/h, > 0
    double vy = 0.0;    // km/h, > 0
};

struct FireModel {
    Point ignition;
    std::vector<std::vector<FirePhase>> scenario_phases; // index = scenario id - 1

    int num_scenarios() const { return static_cast<int>(scenario_phases.size()); }

    void validate() const {
        if (scenario_phases.empty()) throw invariant_error("fire model: no scenarios");
        for (const auto& phases : scenario_phases) {
            if (phases.empty()) throw invariant_error("fire model: empty phase list");
            if (std::abs(phases[0].start) > 1e-12) throw invariant_error("fire model: first phase must start at 0");
            double prev = -1.0;
            for (const auto& p : phases) {
                if (!(p.vx > 0.0) || !(p.vy > 0.0)) throw invariant_error("fire model: non-positive axis velocity");
                if (p.start <= prev) throw invariant_error("fire model: phase starts must increase");
                prev = p.start;
            }
        }
        for (size_t s = 1; s < scenario_phases.size(); ++s) {
            const FirePhase &a = scenario_phases[0][0], &b = scenario_phases[s][0];
            if (a.vx != b.vx || a.vy != b.vy)
                throw invariant_error("fire model: phase 1 must be identical across scenarios");
        }
    }

    // Semi-axes (Rx, Ry) of the front under the given scenario at time t.
    std::pair<double, double> axes_at(int scenario_id, double t) const {
        const auto& phases = scenario_phases[static_cast<size_t>(scenario_id) - 1];
        double rx = 0.0, ry = 0.0;
        for (size_t k = 0; k < phases.size(); ++k) {
            double seg_end = (k + 1 < phases.size()) ? std::min(phases[k + 1].start, t) : t;
            if (seg_end <= phases[k].start) break;
            rx += phases[k].vx * (seg_end - phases[k].start);
            ry += phases[k].vy * (seg_end - phases[k].start);
            if (seg_end >= t) break;
        }
        return {rx, ry};
    }
};

// Table 1 schedule: common phase-1 velocities, then one wind-change phase per
// scenario starting at that scenario's occurrence time.
inline FireModel make_fire_model(Point ignition, double vx0, double vy0,
                                 const std::vector<std::pair<double, std::pair<double, double>>>& changes) {
    FireModel m;
    m.ignition = ignition;
    for (const auto& [to, v] : changes)
        m.scenario_phases.push_back({{0.0, vx0, vy0}, {to, v.first, v.second}});
    m.validate();
    return m;
}

namespace detail {

inline void solve_quadratic(double a, double b, double c, std::vector<double>& roots) {
    if (std::abs(a) < 1e-300) {
        if (std::abs(b) > 1e-300) roots.push_back(-c / b);
        return;
    }
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return;
    double sd = std::sqrt(disc);
    // Numerically stable pairing
    double q = (b >= 0.0) ? -0.5 * (b + sd) : -0.5 * (b - sd);
    roots.push_back(q / a);
    if (std::abs(q) > 1e-300) roots.push_back(c / q);
}

// Real roots of z^3 + a z^2 + b z + c = 0 (Cardano / trigonometric form).
inline std::vector<double> solve_cubic(double a, double b, double c) {
    std::vector<double> roots;
    double p = b - a * a / 3.0;
    double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    double shift = -a / 3.0;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
        double sd = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + sd);
        double v = std::cbrt(-q / 2.0 - sd);
        roots.push_back(shift + u + v);
    } else if (std::abs(p) < 1e-300) {
        roots.push_back(shift + std::cbrt(-q));
    } else {
        double r = std::sqrt(-p * p * p / 27.0);
        double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
        double m = 2.0 * std::sqrt(-p / 3.0);
        for (int k = 0; k < 3; ++k)
            roots.push_back(shift + m * std::cos((phi + 2.0 * M_PI * k) / 3.0));
    }
    return roots;
}

// Real roots of a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0 = 0 via Ferrari's method.
inline std::vector<double> solve_quartic(double a4, double a3, double a2, double a1, double a0) {
    std::vector<double> roots;
    if (std::abs(a4) < 1e-300) {
        // degenerate; callers never hit this with positive axis velocities
        auto cub = solve_cubic(a2 / a3, a1 / a3, a0 / a3);
        return cub;
    }
    double p3 = a3 / a4, p2 = a2 / a4, p1 = a1 / a4, p0 = a0 / a4;
    double shift = -p3 / 4.0;
    double p = p2 - 3.0 * p3 * p3 / 8.0;
    double q = p1 - p3 * p2 / 2.0 + p3 * p3 * p3 / 8.0;
    double r = p0 - p3 * p1 / 4.0 + p3 * p3 * p2 / 16.0 - 3.0 * p3 * p3 * p3 * p3 / 256.0;
    if (std::abs(q) < 1e-12) {
        std::vector<double> ys;
        solve_quadratic(1.0, p, r, ys);
        for (double y : ys) {
            if (y < 0.0) continue;
            double s = std::sqrt(y);
            roots.push_back(shift + s);
            roots.push_back(shift - s);
        }
        return roots;
    }
    // Resolvent cubic z^3 + 2p z^2 + (p^2 - 4r) z - q^2 = 0 has a positive root.
    double z0 = 0.0;
    for (double z : solve_cubic(2.0 * p, p * p - 4.0 * r, -q * q))
        if (z > z0) z0 = z;
    if (z0 <= 0.0) return roots;
    double s = std::sqrt(z0);
    double t0 = (p + z0) / 2.0 - q / (2.0 * s);
    double t1 = (p + z0) / 2.0 + q / (2.0 * s);
    std::vector<double> ys;
    solve_quadratic(1.0, s, t0, ys);
    solve_quadratic(1.0, -s, t1, ys);
    for (double y : ys) roots.push_back(shift + y);
    return roots;
}

} // namespace detail

// Earliest time at which the fire front under `scenario_id` reaches `point`;
// none if that time exceeds `horizon`. Closed form within each phase (the
// inclusion boundary is polynomial in t), with a bracketed refinement pass to
// stabilize the analytic root.
inline std::optional<double> impact_time(const Point& point, const FireModel& model, int scenario_id,
                                         double horizon) {
    const auto& phases = model.scenario_phases[static_cast<size_t>(scenario_id) - 1];
    const double dx = point.x - model.ignition.x;
    const double dy = point.y - model.ignition.y;
    if (dx == 0.0 && dy == 0.0) return 0.0;

    double rx0 = 0.0, ry0 = 0.0; // axes at the start of the current phase
    for (size_t k = 0; k < phases.size(); ++k) {
        const double b = phases[k].start;
        if (b > horizon) break;
        const double seg_end = (k + 1 < phases.size()) ? std::min(phases[k + 1].start, horizon) : horizon;
        const double len = seg_end - b;
        const double vx = phases[k].vx, vy = phases[k].vy;

        if (k == 0) {
            // Axes grow from zero: inclusion boundary gives t directly.
            double t = std::hypot(dx / vx, dy / vy);
            if (t <= len + 1e-12) return std::min(t, seg_end);
        } else {
            // Inside already at the phase boundary (continuity).
            if (rx0 > 0.0 && ry0 > 0.0) {
                double g = (dx / rx0) * (dx / rx0) + (dy / ry0) * (dy / ry0);
                if (g <= 1.0) return b;
            }
            auto residual = [&](double u) {
                double px = rx0 + vx * u, py = ry0 + vy * u;
                return dx * dx * py * py + dy * dy * px * px - px * px * py * py;
            };
            if (residual(len) <= 0.0) {
                // Exactly one sign change in (0, len]: the front passes the point.
                double root = len;
                if (dx == 0.0) {
                    root = (std::abs(dy) - ry0) / vy;
                } else if (dy == 0.0) {
                    root = (std::abs(dx) - rx0) / vx;
                } else {
                    // f(u) = dx^2 (ry0+vy u)^2 + dy^2 (rx0+vx u)^2 - (rx0+vx u)^2 (ry0+vy u)^2
                    const double A = rx0, V = vx, B = ry0, W = vy;
                    const double c0 = A * A * B * B;
                    const double c1 = 2.0 * A * A * B * W + 2.0 * A * V * B * B;
                    const double c2 = A * A * W * W + 4.0 * A * B * V * W + V * V * B * B;
                    const double c3 = 2.0 * A * V * W * W + 2.0 * V * V * B * W;
                    const double c4 = V * V * W * W;
                    const double q0 = dx * dx * B * B + dy * dy * A * A - c0;
                    const double q1 = 2.0 * dx * dx * B * W + 2.0 * dy * dy * A * V - c1;
                    const double q2 = dx * dx * W * W + dy * dy * V * V - c2;
                    double best = -1.0;
                    for (double u : detail::solve_quartic(-c4, -c3, q2, q1, q0))
                        if (u >= -1e-9 && u <= len + 1e-9 && (best < 0.0 || u < best)) best = u;
                    root = (best >= 0.0) ? std::clamp(best, 0.0, len) : len;
                }
                // Bracketed Newton/bisection polish against the residual.
                double lo = 0.0, hi = len;
                root = std::clamp(root, lo, hi);
                for (int it = 0; it < 60; ++it) {
                    double f = residual(root);
                    if (f > 0.0)
                        lo = root;
                    else
                        hi = root;
                    double px = rx0 + vx * root, py = ry0 + vy * root;
                    double df = 2.0 * dx * dx * py * vy + 2.0 * dy * dy * px * vx -
                                2.0 * px * vx * py * py - 2.0 * px * px * py * vy;
                    double next = (std::abs(df) > 1e-300) ? root - f / df : 0.5 * (lo + hi);
                    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                    if (std::abs(next - root) < 1e-13) {
                        root = next;
                        break;
                    }
                    root = next;
                }
                return b + root;
            }
        }
        rx0 += vx * len;
        ry0 += vy * len;
        if (seg_end >= horizon) break;
    }
    return std::nullopt;
}

// Which futures put an asset at risk. For two scenarios the values read:
// stage-1 impacted, impacted only under one scenario, impacted under both
// after the staging time, or not at risk at all.
struct RiskCategory {
    enum class Kind { stage1, at_risk, not_at_risk };
    Kind kind = Kind::not_at_risk;
    std::vector<int> scenarios; // for at_risk: sorted scenario ids with impact within the horizon

    bool is_stage1() const { return kind == Kind::stage1; }
    bool is_not_at_risk() const { return kind == Kind::not_at_risk; }
    bool in_scenario(int id) const {
        return kind == Kind::at_risk && std::find(scenarios.begin(), scenarios.end(), id) != scenarios.end();
    }
    bool single_scenario() const { return kind == Kind::at_risk && scenarios.size() == 1; }
    bool all_scenarios(int f) const { return kind == Kind::at_risk && static_cast<int>(scenarios.size()) == f; }
};

inline std::map<int, RiskCategory> classify(const std::vector<Asset>& assets, const FireModel& model,
                                            const ScenarioSet& scenario_set, double horizon) {
    std::map<int, RiskCategory> out;
    const int f = scenario_set.size();
    for (const auto& a : assets) {
        std::vector<std::optional<double>> taus;
        for (int s = 1; s <= f; ++s)
            taus.push_back(impact_time({a.x, a.y}, model, s, horizon));
        RiskCategory cat;
        bool all = true, identical = true;
        for (int s = 0; s < f; ++s) {
            if (!taus[static_cast<size_t>(s)]) {
                all = false;
                identical = false;
            } else if (taus[0] && std::abs(*taus[static_cast<size_t>(s)] - *taus[0]) > 1e-9) {
                identical = false;
            }
        }
        if (all && identical && *taus[0] <= scenario_set.staging_time + 1e-9) {
            cat.kind = RiskCategory::Kind::stage1;
        } else {
            for (int s = 0; s < f; ++s)
                if (taus[static_cast<size_t>(s)]) cat.scenarios.push_back(s + 1);
            cat.kind = cat.scenarios.empty() ? RiskCategory::Kind::not_at_risk : RiskCategory::Kind::at_risk;
        }
        out[a.id] = cat;
    }
    return out;
}

struct DerivedWindows {
    TimeWindows windows;
    // (asset id, scenario id or 0 for stage 1): impact too early to complete service
    std::vector<std::pair<int, int>> dropped;
    std::map<int, RiskCategory> categories;
};

// Window rule: service must complete before impact, so close = tau - a and
// open = max(0, close - TW). Stage-1 closes are additionally clipped so the
// service also completes by the staging time.
inline DerivedWindows derive_windows(const std::vector<Asset>& assets, const FireModel& model,
                                     const ScenarioSet& scenario_set, double horizon, double tw1, double tw2) {
    DerivedWindows out;
    out.windows.horizon = horizon;
    out.categories = classify(assets, model, scenario_set, horizon);
    for (const auto& a : assets) {
        const RiskCategory& cat = out.categories.at(a.id);
        if (cat.is_stage1()) {
            double tau = *impact_time({a.x, a.y}, model, 1, horizon);
            double close = std::min(tau - a.service, scenario_set.staging_time - a.service);
            if (close < 0.0) {
                out.dropped.emplace_back(a.id, 0);
                continue;
            }
            out.windows.stage1[a.id] = {std::max(0.0, close - tw1), close};
        } else if (cat.kind == RiskCategory::Kind::at_risk) {
            for (int s : cat.scenarios) {
                double tau = *impact_time({a.x, a.y}, model, s, horizon);
                double close = tau - a.service;
                if (close < 0.0) {
                    out.dropped.emplace_back(a.id, s);
                    continue;
                }
                out.windows.stage2[s][a.id] = {std::max(0.0, close - tw2), close};
            }
        }
    }
    return out;
}

} // namespace fireplan
