#pragma once

#include <string>
#include <vector>

#include "fireplan/core.hpp"
#include "fireplan/generator.hpp"

// Shared builders for hand-made and seeded micro instances used across the
// test suites and the acceptance runner.

namespace fireplan::testutil {

struct AssetSpec {
    double x, y;
    double value;
    double service;
    std::vector<int> req;
};

// Assembles a consistent instance from explicit windows; travel times are
// Euclidean over `speed` for every type.
inline Instance make_instance(const std::vector<AssetSpec>& assets, Point depot, std::vector<int> fleet,
                              double speed, double staging_time, std::vector<Scenario> scenarios,
                              const std::map<int, TimeWindow>& stage1,
                              const std::map<int, std::map<int, TimeWindow>>& stage2, double horizon = -1.0) {
    Instance inst;
    inst.meta.name = "test";
    inst.meta.seed = 0;
    for (size_t i = 0; i < assets.size(); ++i) {
        Asset a;
        a.id = static_cast<int>(i) + 1;
        a.x = assets[i].x;
        a.y = assets[i].y;
        a.value = assets[i].value;
        a.service = assets[i].service;
        a.requirements = assets[i].req;
        inst.assets.push_back(std::move(a));
    }
    inst.depot_start = depot;
    inst.depot_end = depot;
    inst.fleet.counts = fleet;
    inst.fleet.depot_availability = fleet;
    inst.scenario_set.staging_time = staging_time;
    inst.scenario_set.scenarios = std::move(scenarios);

    const int nodes = inst.num_nodes();
    auto pt = [&](int v) -> Point {
        if (v == 0 || v == nodes - 1) return depot;
        return {inst.asset(v).x, inst.asset(v).y};
    };
    inst.travel.num_nodes = nodes;
    std::vector<double> row(static_cast<size_t>(nodes) * nodes, 0.0);
    double max_leg = 0.0;
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) {
            double t = (i == j) ? 0.0 : round9(euclidean(pt(i), pt(j)) / speed);
            row[static_cast<size_t>(i) * nodes + j] = t;
            max_leg = std::max(max_leg, t);
        }
    inst.travel.times.assign(inst.fleet.counts.size(), row);

    inst.windows.stage1 = stage1;
    inst.windows.stage2 = stage2;
    double max_close = 0.0;
    for (const auto& [id, w] : stage1) max_close = std::max(max_close, w.close);
    for (const auto& [sc, ws] : stage2)
        for (const auto& [id, w] : ws) max_close = std::max(max_close, w.close);
    inst.windows.horizon = horizon > 0.0 ? horizon : round9(max_close + max_leg + 1.0);
    inst.validate();
    return inst;
}

// The bundled two-asset example: one stage-1 asset and one asset at risk in
// both scenarios, a single vehicle type.
inline Instance make_tiny_2asset() {
    std::vector<AssetSpec> assets = {
        {1.0, 0.0, 10.0, 0.5, {1}},
        {0.0, 2.0, 20.0, 0.5, {1}},
    };
    std::map<int, TimeWindow> s1 = {{1, {0.5, 1.5}}};
    std::map<int, std::map<int, TimeWindow>> s2 = {{1, {{2, {4.0, 5.0}}}}, {2, {{2, {5.5, 6.5}}}}};
    Instance inst = make_instance(assets, {0.0, 0.0}, {1}, 1.0, 2.5,
                                  {{1, 0.6, 2.5}, {2, 0.4, 4.5}}, s1, s2, 8.0);
    inst.meta.name = "tiny_2asset";
    return inst;
}

// Seeded random micro instance: n <= 7 assets, <= 3 vehicles, F = 2. Shapes
// sized for the brute-force oracle.
inline Instance make_micro_instance(std::uint64_t seed, int max_assets = 7) {
    Pcg32 rng(seed, 0x9e3779b97f4a7c15ULL);
    const double st = 3.0;
    const double service = 0.25;
    const double speed = 10.0;
    const int n = 1 + static_cast<int>(rng.bounded(static_cast<std::uint32_t>(max_assets)));

    static const std::vector<std::vector<int>> fleets = {{1}, {2}, {3}, {1, 1}, {2, 1}, {1, 1, 1}};
    std::vector<int> fleet = fleets[rng.bounded(static_cast<std::uint32_t>(fleets.size()))];
    const int q = static_cast<int>(fleet.size());

    std::vector<AssetSpec> assets;
    std::map<int, TimeWindow> s1;
    std::map<int, std::map<int, TimeWindow>> s2;
    for (int i = 0; i < n; ++i) {
        AssetSpec a;
        a.x = round9(rng.uniform() * 10.0);
        a.y = round9(rng.uniform() * 10.0);
        a.value = 1.0 + rng.bounded(20);
        a.service = service;
        a.req.assign(static_cast<size_t>(q), 0);
        int total = 0;
        for (int t = 0; t < q; ++t) {
            int r = static_cast<int>(rng.bounded(static_cast<std::uint32_t>(fleet[static_cast<size_t>(t)] + 1)));
            a.req[static_cast<size_t>(t)] = r;
            total += r;
        }
        if (total == 0) a.req[rng.bounded(static_cast<std::uint32_t>(q))] = 1;
        assets.push_back(a);

        const int id = i + 1;
        switch (rng.bounded(4)) {
            case 0: { // stage 1
                double close = round9(0.8 + rng.uniform() * (st - service - 0.9));
                s1[id] = {std::max(0.0, round9(close - 1.0)), close};
                break;
            }
            case 1: { // scenario 1 only
                double close = round9(st + 0.3 + rng.uniform() * 2.0);
                s2[1][id] = {round9(close - 1.0), close};
                break;
            }
            case 2: { // scenario 2 only
                double close = round9(st + 0.8 + rng.uniform() * 2.5);
                s2[2][id] = {round9(close - 1.0), close};
                break;
            }
            default: { // both scenarios
                double c1 = round9(st + 0.3 + rng.uniform() * 2.0);
                double c2 = round9(c1 + 0.3 + rng.uniform());
                s2[1][id] = {round9(c1 - 1.0), c1};
                s2[2][id] = {round9(c2 - 1.0), c2};
            }
        }
    }
    Instance inst = make_instance(assets, {0.0, 0.0}, fleet, speed, st,
                                  {{1, 0.6, st}, {2, 0.4, st + 1.5}}, s1, s2);
    inst.meta.name = "micro-" + std::to_string(seed);
    inst.meta.seed = seed;
    return inst;
}

inline bool instance_equal(const Instance& a, const Instance& b) {
    if (a.num_assets() != b.num_assets()) return false;
    for (int i = 1; i <= a.num_assets(); ++i) {
        const Asset &x = a.asset(i), &y = b.asset(i);
        if (x.x != y.x || x.y != y.y || x.value != y.value || x.service != y.service ||
            x.requirements != y.requirements)
            return false;
    }
    if (a.depot_start.x != b.depot_start.x || a.depot_start.y != b.depot_start.y) return false;
    if (a.depot_end.x != b.depot_end.x || a.depot_end.y != b.depot_end.y) return false;
    if (a.fleet.counts != b.fleet.counts || a.fleet.depot_availability != b.fleet.depot_availability)
        return false;
    if (a.scenario_set.staging_time != b.scenario_set.staging_time) return false;
    if (a.scenario_set.size() != b.scenario_set.size()) return false;
    for (int c = 0; c < a.scenario_set.size(); ++c) {
        const Scenario &x = a.scenario_set.scenarios[static_cast<size_t>(c)],
                       &y = b.scenario_set.scenarios[static_cast<size_t>(c)];
        if (x.id != y.id || x.probability != y.probability || x.occurrence != y.occurrence) return false;
    }
    if (a.travel.num_nodes != b.travel.num_nodes || a.travel.times != b.travel.times) return false;
    if (a.windows.horizon != b.windows.horizon) return false;
    auto win_eq = [](const std::map<int, TimeWindow>& x, const std::map<int, TimeWindow>& y) {
        if (x.size() != y.size()) return false;
        for (const auto& [id, w] : x) {
            auto it = y.find(id);
            if (it == y.end() || it->second.open != w.open || it->second.close != w.close) return false;
        }
        return true;
    };
    if (!win_eq(a.windows.stage1, b.windows.stage1)) return false;
    if (a.windows.stage2.size() != b.windows.stage2.size()) return false;
    for (const auto& [sc, ws] : a.windows.stage2) {
        auto it = b.windows.stage2.find(sc);
        if (it == b.windows.stage2.end() || !win_eq(ws, it->second)) return false;
    }
    return true;
}

} // namespace fireplan::testutil
