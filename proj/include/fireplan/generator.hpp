#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fireplan/core.hpp"
#include "fireplan/firespread.hpp"

// Seeded benchmark instance generation: assets uniform on an 80x80 km grid,
// windows from the elliptical fire model, two wind-change scenarios, and the
// standard parameter set (axis velocities 14/16 then 19/17 or 21/19, staging
// time 4.5 h, delay 2 h, window length 1 h, service 0.5 h, speed 30 km/h).

namespace fireplan {

// Minimal-state PCG32; fixed algorithm so identical seeds produce identical
// instances on every platform.
class Pcg32 {
public:
    Pcg32(std::uint64_t seed, std::uint64_t stream) : state_(0), inc_((stream << 1u) | 1u) {
        next();
        state_ += seed;
        next();
    }

    std::uint32_t next() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // Unbiased bounded draw (rejection sampling).
    std::uint32_t bounded(std::uint32_t bound) {
        std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            std::uint32_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    double uniform() { return next() * 0x1p-32; }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

inline double round9(double v) { return std::round(v * 1e9) / 1e9; }

struct GeneratorParams {
    int n_assets = 50;
    double grid = 80.0;
    std::vector<int> fleet_counts = {3, 2, 2}; // Set1
    double vx0 = 14.0, vy0 = 16.0;
    double vx1 = 19.0, vy1 = 17.0;
    double vx2 = 21.0, vy2 = 19.0;
    double delay = 2.0;
    double tw1 = 1.0, tw2 = 1.0;
    double service = 0.5;
    double p1 = 0.6, p2 = 0.4;
    double speed = 30.0;
    double staging_time = 4.5;
    // Ignition sits just off the south-west corner; the horizon is the time up
    // to which an asset counts as at risk. Together they split the grid into
    // all four risk categories.
    double ignition_x = -10.0, ignition_y = -10.0;
    double risk_horizon = 7.0;
    double depot_frac = 0.95; // depot at (frac*grid, frac*grid), ahead of the fire
    int value_min = 10, value_max = 100;
    int max_retries = 256;
    bool require_categories = true;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_assets < 1) throw invariant_error("generator: n_assets must be >= 1");
        if (!(grid > 0.0)) throw invariant_error("generator: grid must be positive");
        if (fleet_counts.empty()) throw invariant_error("generator: empty fleet");
        for (int c : fleet_counts)
            if (c < 0) throw invariant_error("generator: negative fleet count");
        for (double v : {vx0, vy0, vx1, vy1, vx2, vy2, delay, tw1, tw2, speed})
            if (!(v > 0.0)) throw invariant_error("generator: non-positive fire/travel parameter");
        if (!(service >= 0.0)) throw invariant_error("generator: negative service duration");
        if (std::abs(p1 + p2 - 1.0) > kProbTol) throw invariant_error("generator: P(1)+P(2) != 1");
        if (p1 < 0.0 || p2 < 0.0) throw invariant_error("generator: negative probability");
        if (!(staging_time > 0.0)) throw invariant_error("generator: non-positive staging time");
        if (!(risk_horizon > staging_time)) throw invariant_error("generator: risk horizon must exceed staging time");
        if (value_min < 0 || value_max < value_min) throw invariant_error("generator: bad value range");
    }
};

inline Fleet preset_fleet(const std::string& name) {
    Fleet f;
    if (name == "set1")
        f.counts = {3, 2, 2};
    else if (name == "set2")
        f.counts = {4, 3, 2};
    else if (name == "set2-caption") // the alternative reading {3,3,2}
        f.counts = {3, 3, 2};
    else
        throw invariant_error("unknown fleet preset: " + name);
    f.depot_availability = f.counts;
    return f;
}

namespace detail {

inline std::vector<std::vector<int>> requirement_pool(const std::vector<int>& fleet_counts) {
    static const std::vector<std::vector<int>> base = {
        {2, 1, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {1, 1, 1}, {1, 2, 0}, {1, 2, 1}};
    std::vector<std::vector<int>> pool;
    if (fleet_counts.size() == 3) {
        for (const auto& r : base) {
            bool ok = true;
            for (size_t q = 0; q < 3; ++q)
                if (r[q] > fleet_counts[q]) ok = false;
            if (ok) pool.push_back(r);
        }
    }
    if (pool.empty()) {
        // fallback: one unit vector per type that has any vehicles
        for (size_t q = 0; q < fleet_counts.size(); ++q) {
            if (fleet_counts[q] > 0) {
                std::vector<int> r(fleet_counts.size(), 0);
                r[q] = 1;
                pool.push_back(r);
            }
        }
    }
    if (pool.empty()) throw invariant_error("generator: fleet has no vehicles");
    return pool;
}

} // namespace detail

inline FireModel fire_model_from_params(const GeneratorParams& p) {
    return make_fire_model({p.ignition_x, p.ignition_y}, p.vx0, p.vy0,
                           {{p.staging_time, {p.vx1, p.vy1}},
                            {p.staging_time + p.delay, {p.vx2, p.vy2}}});
}

// Pure function of (seed, params): identical inputs give byte-identical files.
inline Instance generate(const GeneratorParams& params) {
    params.validate();
    const auto pool = detail::requirement_pool(params.fleet_counts);
    const FireModel fire = fire_model_from_params(params);
    const int q = static_cast<int>(params.fleet_counts.size());

    for (int attempt = 0;; ++attempt) {
        Pcg32 rng(params.seed, static_cast<std::uint64_t>(attempt));
        Instance inst;
        for (int i = 0; i < params.n_assets; ++i) {
            Asset a;
            a.id = i + 1;
            a.x = round9(rng.uniform() * params.grid);
            a.y = round9(rng.uniform() * params.grid);
            a.value = static_cast<double>(
                params.value_min + static_cast<int>(rng.bounded(static_cast<std::uint32_t>(
                                      params.value_max - params.value_min + 1))));
            a.service = params.service;
            a.requirements = pool[rng.bounded(static_cast<std::uint32_t>(pool.size()))];
            inst.assets.push_back(std::move(a));
        }

        inst.depot_start = {round9(params.depot_frac * params.grid), round9(params.depot_frac * params.grid)};
        inst.depot_end = inst.depot_start;
        inst.fleet.counts = params.fleet_counts;
        inst.fleet.depot_availability = params.fleet_counts;
        inst.scenario_set.staging_time = params.staging_time;
        inst.scenario_set.scenarios = {{1, params.p1, params.staging_time},
                                       {2, params.p2, params.staging_time + params.delay}};

        DerivedWindows dw =
            derive_windows(inst.assets, fire, inst.scenario_set, params.risk_horizon, params.tw1, params.tw2);

        if (params.require_categories) {
            bool stage1 = false, single = false, both = false, none = false;
            for (const auto& [id, cat] : dw.categories) {
                if (cat.is_stage1()) stage1 = true;
                else if (cat.is_not_at_risk()) none = true;
                else if (cat.all_scenarios(2)) both = true;
                else single = true;
            }
            if (!(stage1 && single && both && none)) {
                if (attempt + 1 >= params.max_retries)
                    throw invariant_error("generator: could not cover all four risk categories within " +
                                          std::to_string(params.max_retries) + " retries");
                continue;
            }
        }

        // Travel times: Euclidean distance over uniform vehicle speed, one
        // (identical) matrix per type.
        const int nodes = inst.num_nodes();
        auto node_point = [&](int v) -> Point {
            if (v == 0) return inst.depot_start;
            if (v == nodes - 1) return inst.depot_end;
            const Asset& a = inst.asset(v);
            return {a.x, a.y};
        };
        inst.travel.num_nodes = nodes;
        std::vector<double> row(static_cast<size_t>(nodes) * nodes, 0.0);
        double max_leg = 0.0;
        for (int i = 0; i < nodes; ++i)
            for (int j = 0; j < nodes; ++j) {
                double t = (i == j) ? 0.0 : round9(euclidean(node_point(i), node_point(j)) / params.speed);
                row[static_cast<size_t>(i) * nodes + j] = t;
                max_leg = std::max(max_leg, t);
            }
        inst.travel.times.assign(static_cast<size_t>(q), row);

        double max_close = 0.0;
        for (const auto& [id, w] : dw.windows.stage1) max_close = std::max(max_close, w.close);
        for (const auto& [sc, ws] : dw.windows.stage2)
            for (const auto& [id, w] : ws) max_close = std::max(max_close, w.close);
        inst.windows = dw.windows;
        inst.windows.horizon = round9(max_close + max_leg);
        for (auto& [id, w] : inst.windows.stage1) {
            w.open = round9(w.open);
            w.close = round9(w.close);
        }
        for (auto& [sc, ws] : inst.windows.stage2)
            for (auto& [id, w] : ws) {
                w.open = round9(w.open);
                w.close = round9(w.close);
            }

        inst.meta.name = "gen-seed" + std::to_string(params.seed) + "-n" + std::to_string(params.n_assets);
        inst.meta.seed = params.seed;
        inst.meta.retries = attempt;
        inst.meta.params = {{"grid", params.grid},
                            {"vx0", params.vx0},
                            {"vy0", params.vy0},
                            {"vx1", params.vx1},
                            {"vy1", params.vy1},
                            {"vx2", params.vx2},
                            {"vy2", params.vy2},
                            {"delay", params.delay},
                            {"tw1", params.tw1},
                            {"tw2", params.tw2},
                            {"service", params.service},
                            {"p1", params.p1},
                            {"p2", params.p2},
                            {"speed", params.speed},
                            {"staging_time", params.staging_time},
                            {"ignition_x", params.ignition_x},
                            {"ignition_y", params.ignition_y},
                            {"risk_horizon", params.risk_horizon},
                            {"depot_frac", params.depot_frac},
                            {"value_min", static_cast<double>(params.value_min)},
                            {"value_max", static_cast<double>(params.value_max)}};

        inst.validate();
        return inst;
    }
}

} // namespace fireplan
