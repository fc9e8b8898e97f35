#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fireplan/core.hpp"

// Instance/plan/evaluation files. Serialization is canonical: fixed key order,
// numbers with up to 9 fractional digits and no exponent form, so identical
// data produces byte-identical files on every platform.

namespace fireplan {

using ordered_json = nlohmann::ordered_json;

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string format_number(double v) {
    if (!std::isfinite(v)) throw io_error("refusing to serialize non-finite number");
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    std::string s(buf);
    size_t last = s.find_last_not_of('0');
    if (s[last] == '.') --last;
    s.erase(last + 1);
    if (s == "-0") s = "0";
    return s;
}

inline void dump_string(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

inline bool scalars_only(const ordered_json& j) {
    for (const auto& e : j)
        if (e.is_object() || e.is_array()) return false;
    return true;
}

inline void dump_canonical(const ordered_json& j, std::string& out, int indent) {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_string(it.key(), out);
                out += ": ";
                dump_canonical(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            break;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (scalars_only(j)) {
                out += "[";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ", ";
                    first = false;
                    dump_canonical(e, out, indent);
                }
                out += "]";
            } else {
                out += "[\n";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ",\n";
                    first = false;
                    out += pad_in;
                    dump_canonical(e, out, indent + 1);
                }
                out += "\n" + pad + "]";
            }
            break;
        }
        case ordered_json::value_t::string:
            dump_string(j.get<std::string>(), out);
            break;
        case ordered_json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case ordered_json::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            break;
        case ordered_json::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            break;
        case ordered_json::value_t::number_float:
            out += format_number(j.get<double>());
            break;
        case ordered_json::value_t::null:
            out += "null";
            break;
        default:
            throw io_error("unsupported JSON value type");
    }
}

template <typename T>
T require(const ordered_json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(ctx + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(ctx + ": field '" + key + "': " + e.what());
    }
}

inline const ordered_json& require_node(const ordered_json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(ctx + ": missing field '" + key + "'");
    return *it;
}

} // namespace detail

inline std::string dump_canonical(const ordered_json& j) {
    std::string out;
    detail::dump_canonical(j, out, 0);
    out += "\n";
    return out;
}

inline ordered_json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

// ---- Instance ----

inline ordered_json instance_to_json(const Instance& inst) {
    ordered_json j;
    ordered_json meta;
    meta["name"] = inst.meta.name;
    meta["seed"] = inst.meta.seed;
    meta["retries"] = inst.meta.retries;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : inst.meta.params) params[k] = v;
    meta["params"] = params;
    j["meta"] = meta;

    ordered_json assets = ordered_json::array();
    for (const auto& a : inst.assets) {
        ordered_json ja;
        ja["id"] = a.id;
        ja["x"] = a.x;
        ja["y"] = a.y;
        ja["value"] = a.value;
        ja["service"] = a.service;
        ja["requirements"] = a.requirements;
        assets.push_back(ja);
    }
    j["assets"] = assets;

    ordered_json depots;
    depots["start"] = ordered_json{{"x", inst.depot_start.x}, {"y", inst.depot_start.y}};
    depots["end"] = ordered_json{{"x", inst.depot_end.x}, {"y", inst.depot_end.y}};
    j["depots"] = depots;

    ordered_json fleet;
    fleet["counts"] = inst.fleet.counts;
    fleet["depot_availability"] = inst.fleet.depot_availability;
    j["fleet"] = fleet;

    ordered_json scen;
    scen["staging_time"] = inst.scenario_set.staging_time;
    ordered_json entries = ordered_json::array();
    for (const auto& s : inst.scenario_set.scenarios)
        entries.push_back(ordered_json{{"id", s.id}, {"probability", s.probability}, {"occurrence", s.occurrence}});
    scen["entries"] = entries;
    j["scenarios"] = scen;

    ordered_json travel;
    travel["nodes"] = inst.travel.num_nodes;
    ordered_json times = ordered_json::array();
    for (const auto& row : inst.travel.times) times.push_back(row);
    travel["times"] = times;
    j["travel"] = travel;

    ordered_json win;
    win["horizon"] = inst.windows.horizon;
    ordered_json s1 = ordered_json::array();
    for (const auto& [id, w] : inst.windows.stage1)
        s1.push_back(ordered_json{{"asset", id}, {"open", w.open}, {"close", w.close}});
    win["stage1"] = s1;
    ordered_json s2 = ordered_json::array();
    for (const auto& [sc, ws] : inst.windows.stage2)
        for (const auto& [id, w] : ws)
            s2.push_back(ordered_json{{"scenario", sc}, {"asset", id}, {"open", w.open}, {"close", w.close}});
    win["stage2"] = s2;
    j["windows"] = win;
    return j;
}

inline Instance instance_from_json(const ordered_json& j, const std::string& ctx) {
    using detail::require;
    using detail::require_node;
    Instance inst;
    const auto& meta = require_node(j, "meta", ctx);
    inst.meta.name = require<std::string>(meta, "name", ctx + "/meta");
    inst.meta.seed = require<std::uint64_t>(meta, "seed", ctx + "/meta");
    inst.meta.retries = require<int>(meta, "retries", ctx + "/meta");
    for (const auto& [k, v] : require_node(meta, "params", ctx + "/meta").items())
        inst.meta.params[k] = v.get<double>();

    for (const auto& ja : require_node(j, "assets", ctx)) {
        Asset a;
        const std::string actx = ctx + "/assets";
        a.id = require<int>(ja, "id", actx);
        a.x = require<double>(ja, "x", actx);
        a.y = require<double>(ja, "y", actx);
        a.value = require<double>(ja, "value", actx);
        a.service = require<double>(ja, "service", actx);
        a.requirements = require<std::vector<int>>(ja, "requirements", actx);
        inst.assets.push_back(std::move(a));
    }

    const auto& depots = require_node(j, "depots", ctx);
    const auto& ds = require_node(depots, "start", ctx + "/depots");
    const auto& de = require_node(depots, "end", ctx + "/depots");
    inst.depot_start = {require<double>(ds, "x", ctx), require<double>(ds, "y", ctx)};
    inst.depot_end = {require<double>(de, "x", ctx), require<double>(de, "y", ctx)};

    const auto& fleet = require_node(j, "fleet", ctx);
    inst.fleet.counts = require<std::vector<int>>(fleet, "counts", ctx + "/fleet");
    inst.fleet.depot_availability = require<std::vector<int>>(fleet, "depot_availability", ctx + "/fleet");

    const auto& scen = require_node(j, "scenarios", ctx);
    inst.scenario_set.staging_time = require<double>(scen, "staging_time", ctx + "/scenarios");
    for (const auto& js : require_node(scen, "entries", ctx + "/scenarios")) {
        Scenario s;
        s.id = require<int>(js, "id", ctx + "/scenarios");
        s.probability = require<double>(js, "probability", ctx + "/scenarios");
        s.occurrence = require<double>(js, "occurrence", ctx + "/scenarios");
        inst.scenario_set.scenarios.push_back(s);
    }

    const auto& travel = require_node(j, "travel", ctx);
    inst.travel.num_nodes = require<int>(travel, "nodes", ctx + "/travel");
    for (const auto& row : require_node(travel, "times", ctx + "/travel"))
        inst.travel.times.push_back(row.get<std::vector<double>>());

    const auto& win = require_node(j, "windows", ctx);
    inst.windows.horizon = require<double>(win, "horizon", ctx + "/windows");
    for (const auto& jw : require_node(win, "stage1", ctx + "/windows")) {
        int id = require<int>(jw, "asset", ctx + "/windows/stage1");
        inst.windows.stage1[id] = {require<double>(jw, "open", ctx), require<double>(jw, "close", ctx)};
    }
    for (const auto& jw : require_node(win, "stage2", ctx + "/windows")) {
        int sc = require<int>(jw, "scenario", ctx + "/windows/stage2");
        int id = require<int>(jw, "asset", ctx + "/windows/stage2");
        inst.windows.stage2[sc][id] = {require<double>(jw, "open", ctx), require<double>(jw, "close", ctx)};
    }

    try {
        inst.validate();
    } catch (const invariant_error& e) {
        throw parse_error(ctx + ": " + e.what());
    }
    return inst;
}

inline Instance load_instance(const std::string& path) {
    return instance_from_json(parse_file(path), path);
}

inline void save_instance(const Instance& inst, const std::string& path) {
    inst.validate();
    write_file(path, dump_canonical(instance_to_json(inst)));
}

// ---- Plan ----

inline ordered_json plan_to_json(const Plan& plan) {
    ordered_json j;
    ordered_json vehicles = ordered_json::array();
    auto visits_to_json = [](const std::vector<Visit>& vs) {
        ordered_json a = ordered_json::array();
        for (const auto& v : vs) a.push_back(ordered_json{{"node", v.node}, {"start", v.start}});
        return a;
    };
    for (const auto& v : plan.vehicles) {
        ordered_json jv;
        jv["type"] = v.type;
        jv["index"] = v.index;
        jv["stage1"] = visits_to_json(v.stage1);
        jv["staging_node"] = v.staging_node;
        ordered_json s2 = ordered_json::array();
        for (const auto& [sc, route] : v.stage2)
            s2.push_back(ordered_json{{"scenario", sc}, {"route", visits_to_json(route)}});
        jv["stage2"] = s2;
        vehicles.push_back(jv);
    }
    j["vehicles"] = vehicles;
    ordered_json serviced;
    serviced["stage1"] = plan.serviced_stage1;
    ordered_json s2 = ordered_json::array();
    for (const auto& [sc, ids] : plan.serviced_stage2)
        s2.push_back(ordered_json{{"scenario", sc}, {"assets", ids}});
    serviced["stage2"] = s2;
    j["serviced"] = serviced;
    return j;
}

inline Plan plan_from_json(const ordered_json& j, const std::string& ctx) {
    using detail::require;
    using detail::require_node;
    Plan plan;
    auto visits_from_json = [&](const ordered_json& a) {
        std::vector<Visit> vs;
        for (const auto& jv : a)
            vs.push_back({require<int>(jv, "node", ctx), require<double>(jv, "start", ctx)});
        return vs;
    };
    for (const auto& jv : require_node(j, "vehicles", ctx)) {
        VehiclePlan v;
        v.type = require<int>(jv, "type", ctx + "/vehicles");
        v.index = require<int>(jv, "index", ctx + "/vehicles");
        v.stage1 = visits_from_json(require_node(jv, "stage1", ctx));
        v.staging_node = require<int>(jv, "staging_node", ctx + "/vehicles");
        for (const auto& js : require_node(jv, "stage2", ctx))
            v.stage2[require<int>(js, "scenario", ctx)] = visits_from_json(require_node(js, "route", ctx));
        plan.vehicles.push_back(std::move(v));
    }
    const auto& serviced = require_node(j, "serviced", ctx);
    plan.serviced_stage1 = require<std::vector<int>>(serviced, "stage1", ctx + "/serviced");
    for (const auto& js : require_node(serviced, "stage2", ctx))
        plan.serviced_stage2[require<int>(js, "scenario", ctx)] =
            require<std::vector<int>>(js, "assets", ctx + "/serviced/stage2");
    return plan;
}

inline Plan load_plan(const std::string& path) { return plan_from_json(parse_file(path), path); }

inline void save_plan(const Plan& plan, const std::string& path) {
    write_file(path, dump_canonical(plan_to_json(plan)));
}

// ---- Evaluation ----

inline ordered_json evaluation_to_json(const Evaluation& ev) {
    ordered_json j;
    j["stage1_value"] = ev.stage1_value;
    ordered_json s2 = ordered_json::array();
    for (const auto& [sc, v] : ev.stage2_values)
        s2.push_back(ordered_json{{"scenario", sc}, {"value", v}});
    j["stage2_values"] = s2;
    j["expected_total"] = ev.expected_total;
    ordered_json pct;
    pct["stage1"] = ev.stage1_pct ? ordered_json(*ev.stage1_pct) : ordered_json(nullptr);
    ordered_json pct2 = ordered_json::array();
    for (const auto& [sc, v] : ev.stage2_pct)
        pct2.push_back(ordered_json{{"scenario", sc}, {"value", v ? ordered_json(*v) : ordered_json(nullptr)}});
    pct["stage2"] = pct2;
    j["percentages"] = pct;
    return j;
}

inline void save_evaluation(const Evaluation& ev, const std::string& path) {
    write_file(path, dump_canonical(evaluation_to_json(ev)));
}

} // namespace fireplan
