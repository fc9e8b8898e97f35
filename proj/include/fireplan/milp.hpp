#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "fireplan/core.hpp"

// Solver-agnostic MILP representation with semantic variable labels, plus
// CPLEX-LP-dialect export and external solution-file parsing.

namespace fireplan {

enum class VarKind { binary, integer, continuous };

struct Variable {
    int id = 0;
    VarKind kind = VarKind::continuous;
    double lb = 0.0, ub = 0.0;
    std::string label;
};

enum class ConSense { le, eq, ge };

struct Constraint {
    std::vector<std::pair<int, double>> terms;
    ConSense sense = ConSense::le;
    double rhs = 0.0;
};

struct MilpConfig {
    double t_max = 0.0;
    double default_big_m = 0.0;
};

struct MilpModel {
    std::vector<Variable> vars;
    std::vector<Constraint> cons;
    std::vector<double> objective; // maximize c.x
    MilpConfig config;

    int add_var(VarKind kind, double lb, double ub, const std::string& label) {
        Variable v;
        v.id = static_cast<int>(vars.size());
        v.kind = kind;
        v.lb = lb;
        v.ub = ub;
        v.label = label;
        vars.push_back(std::move(v));
        objective.push_back(0.0);
        return vars.size() ? static_cast<int>(vars.size()) - 1 : 0;
    }
    int add_binary(const std::string& label) { return add_var(VarKind::binary, 0.0, 1.0, label); }
    int add_integer(double lb, double ub, const std::string& label) {
        return add_var(VarKind::integer, lb, ub, label);
    }
    int add_continuous(double lb, double ub, const std::string& label) {
        return add_var(VarKind::continuous, lb, ub, label);
    }

    void add_con(std::vector<std::pair<int, double>> terms, ConSense sense, double rhs) {
        Constraint c;
        c.terms = std::move(terms);
        c.sense = sense;
        c.rhs = rhs;
        cons.push_back(std::move(c));
    }

    void set_objective(int var, double coeff) { objective[static_cast<size_t>(var)] = coeff; }

    void validate() const {
        std::map<std::string, int> seen;
        for (const auto& v : vars) {
            if (!(v.lb <= v.ub)) throw invariant_error("milp: inconsistent bounds on " + v.label);
            if (!std::isfinite(v.lb) || !std::isfinite(v.ub))
                throw invariant_error("milp: non-finite bound on " + v.label);
            if (seen.count(v.label)) throw invariant_error("milp: duplicate label " + v.label);
            seen[v.label] = v.id;
        }
        for (const auto& c : cons) {
            for (const auto& [j, coeff] : c.terms) {
                if (j < 0 || j >= static_cast<int>(vars.size()))
                    throw invariant_error("milp: constraint references undeclared variable");
                if (!std::isfinite(coeff)) throw invariant_error("milp: non-finite coefficient");
            }
            if (!std::isfinite(c.rhs)) throw invariant_error("milp: non-finite rhs");
        }
        for (double c : objective)
            if (!std::isfinite(c)) throw invariant_error("milp: non-finite objective coefficient");
    }

    bool is_integral_kind(int j) const { return vars[static_cast<size_t>(j)].kind != VarKind::continuous; }
};

enum class SolveStatus { optimal, feasible, infeasible, time_limit };

class solution_parse_error : public std::runtime_error {
public:
    explicit solution_parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct Solution {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<double> values;
    double objective = 0.0;
    double bound = 0.0;       // best proven upper bound (maximization)
    std::int64_t nodes = 0;
    std::vector<double> incumbent_history; // objective of each improving incumbent, in order
    std::vector<std::string> warnings;

    double gap() const {
        if (status != SolveStatus::feasible) return 0.0;
        return bound - objective;
    }
};

// ---- LP export ----

namespace detail {

inline std::string lp_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

inline std::string sanitize_lp_name(const std::string& label) {
    std::string out;
    out.reserve(label.size());
    for (char ch : label) {
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')
            out += ch;
        else
            out += '_';
    }
    if (out.empty() || !(std::isalpha(static_cast<unsigned char>(out[0])) || out[0] == '_')) out = "v_" + out;
    return out;
}

// Sanitized, collision-free LP names in variable order.
inline std::vector<std::string> lp_names(const MilpModel& model) {
    std::vector<std::string> names;
    std::map<std::string, int> used;
    for (const auto& v : model.vars) {
        std::string name = sanitize_lp_name(v.label);
        auto it = used.find(name);
        if (it != used.end())
            name += "_" + std::to_string(v.id);
        used[name] = v.id;
        names.push_back(std::move(name));
    }
    return names;
}

inline std::string export_lp(const MilpModel& model) {
    model.validate();
    const auto names = lp_names(model);
    std::string out = "Maximize\n obj:";
    auto append_terms = [&](std::string& dst, const std::vector<std::pair<int, double>>& terms) {
        size_t line_len = dst.size() - dst.rfind('\n') - 1;
        bool first = true;
        for (const auto& [j, coeff] : terms) {
            if (coeff == 0.0) continue;
            std::string term;
            double mag = std::abs(coeff);
            term += (coeff < 0.0) ? (first ? " -" : " -") : (first ? "" : " +");
            term += " ";
            if (mag != 1.0) term += detail::lp_number(mag) + " ";
            term += names[static_cast<size_t>(j)];
            if (line_len + term.size() > 200) {
                dst += "\n   ";
                line_len = 3;
            }
            dst += term;
            line_len += term.size();
            first = false;
        }
        if (first) dst += " 0 " + (model.vars.empty() ? std::string("x") : names[0]);
    };
    std::vector<std::pair<int, double>> obj_terms;
    for (size_t j = 0; j < model.objective.size(); ++j)
        if (model.objective[j] != 0.0) obj_terms.emplace_back(static_cast<int>(j), model.objective[j]);
    append_terms(out, obj_terms);
    out += "\nSubject To\n";
    for (size_t i = 0; i < model.cons.size(); ++i) {
        const auto& c = model.cons[i];
        std::string line = " c" + std::to_string(i + 1) + ":";
        append_terms(line, c.terms);
        line += (c.sense == ConSense::le) ? " <= " : (c.sense == ConSense::ge) ? " >= " : " = ";
        line += detail::lp_number(c.rhs);
        out += line + "\n";
    }
    out += "Bounds\n";
    for (const auto& v : model.vars) {
        if (v.kind == VarKind::binary && v.lb == 0.0 && v.ub == 1.0) continue;
        if (v.lb == v.ub)
            out += " " + names[static_cast<size_t>(v.id)] + " = " + detail::lp_number(v.lb) + "\n";
        else
            out += " " + detail::lp_number(v.lb) + " <= " + names[static_cast<size_t>(v.id)] + " <= " +
                   detail::lp_number(v.ub) + "\n";
    }
    std::string generals, binaries;
    for (const auto& v : model.vars) {
        if (v.kind == VarKind::integer) generals += " " + names[static_cast<size_t>(v.id)] + "\n";
        if (v.kind == VarKind::binary) binaries += " " + names[static_cast<size_t>(v.id)] + "\n";
    }
    if (!generals.empty()) out += "Generals\n" + generals;
    if (!binaries.empty()) out += "Binaries\n" + binaries;
    out += "End\n";
    return out;
}

// ---- External solution parsing ----
//
// Accepts either plain "name value" lines (SCIP, HiGHS, glpsol --output style)
// or a CPLEX XML .sol file. Missing variables default to 0 with a warning;
// a file without any variable entry is an error.

inline Solution parse_external_solution(const std::string& text, const MilpModel& model) {
    const auto names = lp_names(model);
    std::map<std::string, int> by_name;
    for (size_t j = 0; j < names.size(); ++j) by_name[names[j]] = static_cast<int>(j);

    Solution sol;
    sol.values.assign(model.vars.size(), 0.0);
    std::vector<bool> assigned(model.vars.size(), false);
    int count = 0;
    bool optimal_hint = false;

    auto assign = [&](const std::string& name, double value) {
        auto it = by_name.find(name);
        if (it == by_name.end()) throw solution_parse_error("unknown variable in solution file: " + name);
        sol.values[static_cast<size_t>(it->second)] = value;
        assigned[static_cast<size_t>(it->second)] = true;
        ++count;
    };

    if (text.find("<?xml") != std::string::npos || text.find("<CPLEXSolution") != std::string::npos) {
        if (text.find("optimal") != std::string::npos) optimal_hint = true;
        size_t pos = 0;
        while ((pos = text.find("<variable", pos)) != std::string::npos) {
            size_t end = text.find(">", pos);
            if (end == std::string::npos) throw solution_parse_error("malformed XML solution file");
            std::string tag = text.substr(pos, end - pos);
            auto attr = [&](const char* key) -> std::string {
                std::string k = std::string(key) + "=\"";
                size_t a = tag.find(k);
                if (a == std::string::npos) return "";
                a += k.size();
                size_t b = tag.find('"', a);
                return tag.substr(a, b - a);
            };
            std::string name = attr("name");
            std::string value = attr("value");
            if (!name.empty() && !value.empty()) assign(name, std::stod(value));
            pos = end;
        }
    } else {
        size_t start = 0;
        while (start < text.size()) {
            size_t eol = text.find('\n', start);
            if (eol == std::string::npos) eol = text.size();
            std::string line = text.substr(start, eol - start);
            start = eol + 1;
            size_t a = line.find_first_not_of(" \t\r");
            if (a == std::string::npos) continue;
            line = line.substr(a);
            if (line[0] == '#' || line[0] == '\\' || line.rfind("==", 0) == 0) continue;
            if (line.find("status") != std::string::npos || line.find("Status") != std::string::npos) {
                if (line.find("ptimal") != std::string::npos) optimal_hint = true;
                continue;
            }
            if (line.rfind("objective value", 0) == 0 || line.rfind("Objective value", 0) == 0 ||
                line.rfind("Objective:", 0) == 0)
                continue;
            char namebuf[256];
            double value = 0.0;
            if (std::sscanf(line.c_str(), "%255s %lf", namebuf, &value) == 2) {
                assign(namebuf, value);
            } else {
                throw solution_parse_error("malformed solution line: " + line);
            }
        }
    }
    if (count == 0) throw solution_parse_error("solution file contains no variable assignments");
    for (size_t j = 0; j < model.vars.size(); ++j)
        if (!assigned[j] && model.objective[j] != 0.0)
            sol.warnings.push_back("variable " + model.vars[j].label + " missing from solution file; assumed 0");
    sol.objective = 0.0;
    for (size_t j = 0; j < model.vars.size(); ++j) sol.objective += model.objective[j] * sol.values[j];
    sol.bound = sol.objective;
    sol.status = optimal_hint ? SolveStatus::optimal : SolveStatus::feasible;
    return sol;
}

} // namespace fireplan
