#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core data model for the asset protection problem: assets with synchronized
// service requirements, a heterogeneous fleet, wind-change scenarios with a
// staging time, travel times and per-stage/per-scenario service windows.
//
// Node indexing convention used everywhere: node 0 is the start depot, nodes
// 1..n are assets (asset id == node index), node n+1 is the end depot.

namespace fireplan {

constexpr double kTimeTol = 1e-6;
constexpr double kProbTol = 1e-9;

class invariant_error : public std::runtime_error {
public:
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

struct Asset {
    int id = 0;                    // 1..n
    double x = 0.0, y = 0.0;       // km
    double value = 0.0;            // protected value
    double service = 0.0;          // service duration, hours
    std::vector<int> requirements; // vehicles needed per type, |Q| entries
};

struct Fleet {
    std::vector<int> counts;             // kappa_q
    std::vector<int> depot_availability; // vehicles of type q stationed at the start depot

    int num_types() const { return static_cast<int>(counts.size()); }
    int total() const {
        int s = 0;
        for (int c : counts) s += c;
        return s;
    }
};

struct Scenario {
    int id = 0;          // 1..F
    double probability = 0.0;
    double occurrence = 0.0; // TO_c, hours; first scenario's occurrence equals the staging time
};

struct ScenarioSet {
    double staging_time = 0.0; // ST
    std::vector<Scenario> scenarios;

    int size() const { return static_cast<int>(scenarios.size()); }
    const Scenario* find(int id) const {
        for (const auto& s : scenarios)
            if (s.id == id) return &s;
        return nullptr;
    }
};

struct TravelMatrix {
    int num_nodes = 0;                            // n + 2
    std::vector<std::vector<double>> times;       // per type, row-major num_nodes^2

    double at(int type, int from, int to) const {
        return times[static_cast<size_t>(type)][static_cast<size_t>(from) * num_nodes + to];
    }
    double& at(int type, int from, int to) {
        return times[static_cast<size_t>(type)][static_cast<size_t>(from) * num_nodes + to];
    }
};

struct TimeWindow {
    double open = 0.0;
    double close = 0.0;
};

struct TimeWindows {
    double horizon = 0.0;                               // T_max
    std::map<int, TimeWindow> stage1;                   // asset id -> window
    std::map<int, std::map<int, TimeWindow>> stage2;    // scenario id -> asset id -> window

    const TimeWindow* stage1_window(int asset) const {
        auto it = stage1.find(asset);
        return it == stage1.end() ? nullptr : &it->second;
    }
    const TimeWindow* stage2_window(int scenario, int asset) const {
        auto sit = stage2.find(scenario);
        if (sit == stage2.end()) return nullptr;
        auto it = sit->second.find(asset);
        return it == sit->second.end() ? nullptr : &it->second;
    }
};

struct Point {
    double x = 0.0, y = 0.0;
};

struct InstanceMeta {
    std::string name;
    std::uint64_t seed = 0;
    int retries = 0;                       // generator retries used to cover all risk categories
    std::map<std::string, double> params;  // generator parameters, for reproducibility
};

struct Instance {
    InstanceMeta meta;
    std::vector<Asset> assets;
    Point depot_start;
    Point depot_end;
    Fleet fleet;
    ScenarioSet scenario_set;
    TravelMatrix travel;
    TimeWindows windows;

    int num_assets() const { return static_cast<int>(assets.size()); }
    int start_node() const { return 0; }
    int end_node() const { return num_assets() + 1; }
    int num_nodes() const { return num_assets() + 2; }

    const Asset& asset(int id) const { return assets[static_cast<size_t>(id) - 1]; }

    double node_service(int node) const {
        if (node == start_node() || node == end_node()) return 0.0;
        return asset(node).service;
    }

    // Validates every type invariant; throws invariant_error naming the failed check.
    void validate() const;
};

inline void Instance::validate() const {
    const int n = num_assets();
    const int q = fleet.num_types();
    if (q <= 0) throw invariant_error("fleet: no vehicle types");
    if (static_cast<int>(fleet.depot_availability.size()) != q)
        throw invariant_error("fleet: depot_availability size != vehicle type count");
    for (int t = 0; t < q; ++t) {
        if (fleet.counts[t] < 0) throw invariant_error("fleet: negative count");
        if (fleet.depot_availability[t] < 0 || fleet.depot_availability[t] > fleet.counts[t])
            throw invariant_error("fleet: depot_availability exceeds type count");
    }
    for (int i = 0; i < n; ++i) {
        const Asset& a = assets[static_cast<size_t>(i)];
        if (a.id != i + 1) throw invariant_error("asset ids must be 1..n in order");
        if (!(a.value >= 0.0)) throw invariant_error("asset " + std::to_string(a.id) + ": negative value");
        if (!(a.service >= 0.0)) throw invariant_error("asset " + std::to_string(a.id) + ": negative service duration");
        if (static_cast<int>(a.requirements.size()) != q)
            throw invariant_error("asset " + std::to_string(a.id) + ": requirement vector size != |Q|");
        for (int r : a.requirements)
            if (r < 0) throw invariant_error("asset " + std::to_string(a.id) + ": negative requirement");
        if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(a.value) || !std::isfinite(a.service))
            throw invariant_error("asset " + std::to_string(a.id) + ": non-finite field");
    }
    if (scenario_set.size() < 1) throw invariant_error("scenario set empty");
    double psum = 0.0;
    double prev_to = -1.0;
    for (size_t c = 0; c < scenario_set.scenarios.size(); ++c) {
        const Scenario& s = scenario_set.scenarios[c];
        if (s.id != static_cast<int>(c) + 1) throw invariant_error("scenario ids must be 1..F in order");
        if (s.probability < 0.0) throw invariant_error("scenario " + std::to_string(s.id) + ": negative probability");
        if (c == 0 && std::abs(s.occurrence - scenario_set.staging_time) > kTimeTol)
            throw invariant_error("first scenario occurrence must equal the staging time");
        if (s.occurrence <= prev_to) throw invariant_error("scenario occurrence times must be strictly increasing");
        prev_to = s.occurrence;
        psum += s.probability;
    }
    if (std::abs(psum - 1.0) > kProbTol)
        throw invariant_error("scenario probabilities sum to " + std::to_string(psum) + ", expected 1");
    if (travel.num_nodes != num_nodes()) throw invariant_error("travel matrix node count mismatch");
    if (static_cast<int>(travel.times.size()) != q) throw invariant_error("travel matrix type count mismatch");
    for (int t = 0; t < q; ++t) {
        if (travel.times[static_cast<size_t>(t)].size() !=
            static_cast<size_t>(travel.num_nodes) * travel.num_nodes)
            throw invariant_error("travel matrix size mismatch for type " + std::to_string(t + 1));
        for (int i = 0; i < travel.num_nodes; ++i) {
            if (std::abs(travel.at(t, i, i)) > 0.0)
                throw invariant_error("travel: nonzero diagonal entry");
            for (int j = 0; j < travel.num_nodes; ++j)
                if (!(travel.at(t, i, j) >= 0.0) || !std::isfinite(travel.at(t, i, j)))
                    throw invariant_error("travel: negative or non-finite entry");
        }
    }
    if (!(windows.horizon >= 0.0)) throw invariant_error("windows: negative horizon");
    auto check_window = [&](int asset_id, const TimeWindow& w, const std::string& ctx) {
        if (asset_id < 1 || asset_id > n)
            throw invariant_error("windows: unknown asset " + std::to_string(asset_id) + " in " + ctx);
        if (w.open > w.close + kTimeTol)
            throw invariant_error("windows: open > close for asset " + std::to_string(asset_id) + " in " + ctx);
        if (w.open < -kTimeTol || w.close > windows.horizon + kTimeTol)
            throw invariant_error("windows: bounds outside [0, horizon] for asset " + std::to_string(asset_id) +
                                  " in " + ctx);
    };
    for (const auto& [id, w] : windows.stage1) {
        check_window(id, w, "stage1");
        if (w.close + asset(id).service > scenario_set.staging_time + kTimeTol)
            throw invariant_error("windows: stage-1 service at asset " + std::to_string(id) +
                                  " cannot complete by the staging time");
    }
    for (const auto& [sc, ws] : windows.stage2) {
        if (!scenario_set.find(sc)) throw invariant_error("windows: unknown scenario " + std::to_string(sc));
        for (const auto& [id, w] : ws) check_window(id, w, "scenario " + std::to_string(sc));
    }
}

// One stop on a route: a node together with the time service commences there
// (for depots: departure/arrival time).
struct Visit {
    int node = 0;
    double start = 0.0;
};

struct VehiclePlan {
    int type = 0;   // 1..|Q|
    int index = 0;  // 1..kappa_q
    std::vector<Visit> stage1;               // begins at the start depot if the vehicle deploys
    int staging_node = 0;                    // where the vehicle sits at ST (end depot if it returned)
    std::map<int, std::vector<Visit>> stage2; // scenario id -> route; begins at staging_node
};

struct Plan {
    std::vector<VehiclePlan> vehicles;
    std::vector<int> serviced_stage1;             // asset ids, Y^f = 1
    std::map<int, std::vector<int>> serviced_stage2; // scenario id -> asset ids, Y^s(xi) = 1

    bool serviced_in_stage1(int asset) const {
        return std::find(serviced_stage1.begin(), serviced_stage1.end(), asset) != serviced_stage1.end();
    }
    bool serviced_in_scenario(int scenario, int asset) const {
        auto it = serviced_stage2.find(scenario);
        if (it == serviced_stage2.end()) return false;
        return std::find(it->second.begin(), it->second.end(), asset) != it->second.end();
    }
};

struct Evaluation {
    double stage1_value = 0.0;
    std::map<int, double> stage2_values;          // scenario id -> value serviced there
    double expected_total = 0.0;
    // Protected share of the at-risk value pool, percent; absent when the pool is empty.
    std::optional<double> stage1_pct;
    std::map<int, std::optional<double>> stage2_pct;
};

// Objective recomputation: stage-wise serviced values and the probability
// weighted total. Does not check feasibility; that is the validator's job.
inline Evaluation evaluate(const Instance& instance, const Plan& plan) {
    const int n = instance.num_assets();
    for (int id : plan.serviced_stage1)
        if (id < 1 || id > n) throw invariant_error("evaluate: serviced asset " + std::to_string(id) + " out of range");
    for (const auto& [sc, ids] : plan.serviced_stage2) {
        if (!instance.scenario_set.find(sc))
            throw invariant_error("evaluate: unknown scenario " + std::to_string(sc));
        for (int id : ids)
            if (id < 1 || id > n)
                throw invariant_error("evaluate: serviced asset " + std::to_string(id) + " out of range");
    }

    Evaluation ev;
    for (int id : plan.serviced_stage1) ev.stage1_value += instance.asset(id).value;
    ev.expected_total = ev.stage1_value;
    for (const auto& sc : instance.scenario_set.scenarios) {
        double v = 0.0;
        auto it = plan.serviced_stage2.find(sc.id);
        if (it != plan.serviced_stage2.end())
            for (int id : it->second) v += instance.asset(id).value;
        ev.stage2_values[sc.id] = v;
        ev.expected_total += sc.probability * v;
    }

    // Percentage pools come from window membership: stage-1 pool is the set of
    // stage-1 windowed assets, scenario pools the per-scenario windowed assets.
    double pool1 = 0.0;
    for (const auto& [id, w] : instance.windows.stage1) pool1 += instance.asset(id).value;
    if (pool1 > 0.0) ev.stage1_pct = 100.0 * ev.stage1_value / pool1;
    for (const auto& sc : instance.scenario_set.scenarios) {
        double pool = 0.0;
        auto sit = instance.windows.stage2.find(sc.id);
        if (sit != instance.windows.stage2.end())
            for (const auto& [id, w] : sit->second) pool += instance.asset(id).value;
        if (pool > 0.0)
            ev.stage2_pct[sc.id] = 100.0 * ev.stage2_values[sc.id] / pool;
        else
            ev.stage2_pct[sc.id] = std::nullopt;
    }
    return ev;
}

inline double euclidean(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace fireplan
