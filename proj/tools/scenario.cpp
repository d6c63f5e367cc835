#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError((where.empty() ? "" : where + ".") + item.key() + ": unknown key");
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double read_number(const json& obj, const std::string& where, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(join(where, key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(where, key) + ": must be finite");
    return d;
}

std::optional<double> read_optional_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return read_number(obj, where, key);
}

template <class Int>
Int read_count(const json& obj, const std::string& where, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(join(where, key) + ": expected a nonnegative integer");
    return v.get<Int>();
}

FunctionConfig parse_function(const json& obj, const std::string& where, bool noise) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    if (!obj.contains("kind") || !obj.at("kind").is_string()) throw ConfigError(where + ".kind: expected a string");
    FunctionConfig f;
    f.kind = obj.at("kind").get<std::string>();
    auto need = [&](const std::string& key, double& out) {
        if (!obj.contains(key)) throw ConfigError(join(where, key) + ": missing");
        out = read_number(obj, where, key);
    };
    if (f.kind == "zero") {
        reject_unknown(obj, where, {"kind"});
    } else if (f.kind == "constant") {
        reject_unknown(obj, where, {"kind", "k"});
        need("k", f.k);
    } else if (f.kind == "power") {
        reject_unknown(obj, where, {"kind", "k", "p"});
        need("k", f.k);
        need("p", f.p);
    } else if (f.kind == "shifted_power") {
        reject_unknown(obj, where, {"kind", "k", "p", "s0"});
        need("k", f.k);
        need("p", f.p);
        need("s0", f.s0);
    } else if (f.kind == "exponential") {
        reject_unknown(obj, where, {"kind", "k", "c"});
        need("k", f.k);
        need("c", f.c);
    } else if (f.kind == "brownian" && noise) {
        reject_unknown(obj, where, {"kind", "scale"});
        if (obj.contains("scale")) f.scale = read_number(obj, where, "scale");
        if (f.scale < 0.0) throw ConfigError(where + ".scale: must be >= 0");
    } else {
        throw ConfigError(where + ".kind: unknown kind '" + f.kind + "'");
    }
    return f;
}

json function_json(const FunctionConfig& f) {
    json j{{"kind", f.kind}};
    if (f.kind == "constant") j["k"] = f.k;
    if (f.kind == "power" || f.kind == "shifted_power") {
        j["k"] = f.k;
        j["p"] = f.p;
    }
    if (f.kind == "shifted_power") j["s0"] = f.s0;
    if (f.kind == "exponential") {
        j["k"] = f.k;
        j["c"] = f.c;
    }
    if (f.kind == "brownian") j["scale"] = f.scale;
    return j;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// nlohmann reports a byte offset; turn it into line:column.
std::string position(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

FunctionSpec to_function(const FunctionConfig& f, const std::string& field) {
    try {
        if (f.kind == "zero") return FunctionSpec::zero();
        if (f.kind == "constant") return FunctionSpec::constant(f.k);
        if (f.kind == "power") return FunctionSpec::power(f.k, f.p);
        if (f.kind == "shifted_power") return FunctionSpec::shifted_power(f.k, f.p, f.s0);
        if (f.kind == "exponential") return FunctionSpec::exponential(f.k, f.c);
    } catch (const Error& e) {
        throw ConfigError(field + ": " + e.what());
    }
    if (f.kind == "brownian") return FunctionSpec::zero();
    throw ConfigError(field + ".kind: unknown kind '" + f.kind + "'");
}

ProblemSpec ScenarioConfig::problem() const {
    try {
        return ProblemSpec(x0, to_function(intensity, "problem.intensity"), to_function(drift, "problem.drift"),
                           to_function(noise, "problem.noise"), tolerances);
    } catch (const Error& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
    auto same_solver = [](const SolveControls& a, const SolveControls& b) {
        return a.h0 == b.h0 && a.tol == b.tol && a.y_cap == b.y_cap && a.t_max == b.t_max &&
               a.tail_floor == b.tail_floor && a.max_steps == b.max_steps && a.bracket_safety == b.bracket_safety;
    };
    auto same_tol = [](const Tolerances& a, const Tolerances& b) {
        return a.proper == b.proper && a.improper == b.improper && a.inverse == b.inverse;
    };
    return x0 == o.x0 && intensity == o.intensity && drift == o.drift && noise == o.noise &&
           same_tol(tolerances, o.tolerances) && same_solver(solver, o.solver) && simulation == o.simulation &&
           analysis == o.analysis && output_dir == o.output_dir;
}

ScenarioConfig parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        throw ConfigError("malformed JSON at " + position(text, e.byte) + ": " + what.substr(what.find(':') + 2));
    }
    reject_unknown(root, "", {"problem", "tolerances", "solver", "simulation", "analysis", "output"});
    ScenarioConfig cfg;
    try {
        if (!root.contains("problem")) throw ConfigError("problem: missing");
        const json& problem = root.at("problem");
        reject_unknown(problem, "problem", {"x0", "intensity", "drift", "noise"});
        for (const char* key : {"x0", "intensity", "drift"})
            if (!problem.contains(key)) throw ConfigError(std::string("problem.") + key + ": missing");
        cfg.x0 = read_number(problem, "problem", "x0");
        cfg.intensity = parse_function(problem.at("intensity"), "problem.intensity", false);
        cfg.drift = parse_function(problem.at("drift"), "problem.drift", false);
        if (problem.contains("noise")) cfg.noise = parse_function(problem.at("noise"), "problem.noise", true);

        if (root.contains("tolerances")) {
            const json& t = root.at("tolerances");
            reject_unknown(t, "tolerances", {"proper", "improper", "inverse"});
            if (t.contains("proper")) cfg.tolerances.proper = read_number(t, "tolerances", "proper");
            if (t.contains("improper")) cfg.tolerances.improper = read_number(t, "tolerances", "improper");
            if (t.contains("inverse")) cfg.tolerances.inverse = read_number(t, "tolerances", "inverse");
        }
        if (root.contains("solver")) {
            const json& s = root.at("solver");
            reject_unknown(s, "solver", {"h0", "tol", "y_cap", "t_max", "tail_floor", "max_steps", "bracket_safety"});
            if (s.contains("h0")) cfg.solver.h0 = read_number(s, "solver", "h0");
            if (s.contains("tol")) cfg.solver.tol = read_number(s, "solver", "tol");
            if (s.contains("y_cap")) cfg.solver.y_cap = read_number(s, "solver", "y_cap");
            if (s.contains("t_max")) cfg.solver.t_max = read_number(s, "solver", "t_max");
            if (s.contains("tail_floor")) cfg.solver.tail_floor = read_number(s, "solver", "tail_floor");
            if (s.contains("max_steps")) cfg.solver.max_steps = read_count<std::size_t>(s, "solver", "max_steps");
            if (s.contains("bracket_safety")) cfg.solver.bracket_safety = read_number(s, "solver", "bracket_safety");
        }
        if (root.contains("simulation")) {
            const json& s = root.at("simulation");
            reject_unknown(s, "simulation", {"paths", "dt", "horizon", "seed", "threads", "grid_points"});
            if (s.contains("paths")) cfg.simulation.paths = read_count<std::size_t>(s, "simulation", "paths");
            if (s.contains("dt")) cfg.simulation.dt = read_number(s, "simulation", "dt");
            cfg.simulation.horizon = read_optional_number(s, "simulation", "horizon");
            if (s.contains("seed")) cfg.simulation.seed = read_count<std::uint64_t>(s, "simulation", "seed");
            if (s.contains("threads")) cfg.simulation.threads = read_count<unsigned>(s, "simulation", "threads");
            if (s.contains("grid_points")) cfg.simulation.grid_points = read_count<unsigned>(s, "simulation", "grid_points");
        }
        if (root.contains("analysis")) {
            const json& a = root.at("analysis");
            reject_unknown(a, "analysis", {"convention", "quantile", "crossing_level", "hitting_level"});
            if (a.contains("convention")) {
                if (!a.at("convention").is_string()) throw ConfigError("analysis.convention: expected a string");
                try {
                    cfg.analysis.convention = parse_convention(a.at("convention").get<std::string>());
                } catch (const Error& e) {
                    throw ConfigError(std::string("analysis.convention: ") + e.what());
                }
            }
            if (a.contains("quantile")) cfg.analysis.quantile = read_number(a, "analysis", "quantile");
            cfg.analysis.crossing_level = read_optional_number(a, "analysis", "crossing_level");
            cfg.analysis.hitting_level = read_optional_number(a, "analysis", "hitting_level");
        }
        if (root.contains("output")) {
            const json& o = root.at("output");
            reject_unknown(o, "output", {"dir"});
            if (o.contains("dir")) {
                if (!o.at("dir").is_string()) throw ConfigError("output.dir: expected a string");
                cfg.output_dir = o.at("dir").get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid value: ") + e.what());
    }

    if (!(cfg.simulation.dt > 0.0)) throw ConfigError("simulation.dt: must be positive");
    if (cfg.simulation.paths == 0) throw ConfigError("simulation.paths: must be at least 1");
    if (cfg.simulation.horizon && !(*cfg.simulation.horizon > 0.0))
        throw ConfigError("simulation.horizon: must be positive");
    if (!(cfg.analysis.quantile > 0.0 && cfg.analysis.quantile < 1.0))
        throw ConfigError("analysis.quantile: must lie in (0, 1)");
    if (!(cfg.solver.tol > 0.0)) throw ConfigError("solver.tol: must be positive");
    if (!(cfg.solver.t_max > 0.0)) throw ConfigError("solver.t_max: must be positive");
    cfg.problem();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_scenario(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

nlohmann::json to_json(const ScenarioConfig& c) {
    json j;
    j["problem"] = {{"x0", c.x0},
                    {"intensity", function_json(c.intensity)},
                    {"drift", function_json(c.drift)},
                    {"noise", function_json(c.noise)}};
    j["tolerances"] = {{"proper", c.tolerances.proper}, {"improper", c.tolerances.improper}, {"inverse", c.tolerances.inverse}};
    j["solver"] = {{"h0", c.solver.h0},
                   {"tol", c.solver.tol},
                   {"y_cap", c.solver.y_cap},
                   {"t_max", c.solver.t_max},
                   {"tail_floor", c.solver.tail_floor},
                   {"max_steps", c.solver.max_steps},
                   {"bracket_safety", c.solver.bracket_safety}};
    j["simulation"] = {{"paths", c.simulation.paths},
                       {"dt", c.simulation.dt},
                       {"horizon", optional_json(c.simulation.horizon)},
                       {"seed", c.simulation.seed},
                       {"threads", c.simulation.threads},
                       {"grid_points", c.simulation.grid_points}};
    j["analysis"] = {{"convention", std::string(to_string(c.analysis.convention))},
                     {"quantile", c.analysis.quantile},
                     {"crossing_level", optional_json(c.analysis.crossing_level)},
                     {"hitting_level", optional_json(c.analysis.hitting_level)}};
    j["output"] = {{"dir", c.output_dir}};
    return j;
}

}  // namespace blowup::cli
