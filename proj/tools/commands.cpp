#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

#include "blowup/bounds.hpp"
#include "blowup/dynamics.hpp"
#include "blowup/errors.hpp"
#include "blowup/osgood.hpp"
#include "blowup/stochastic.hpp"

namespace blowup::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string csv_cell(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

const char* method_name(ExplosionMethod m) {
    switch (m) {
        case ExplosionMethod::osgood_exact: return "osgood_exact";
        case ExplosionMethod::numeric_blowup: return "numeric_blowup";
        case ExplosionMethod::epa_bounds: return "epa_bounds";
        case ExplosionMethod::submult_bound: return "submult_bound";
        case ExplosionMethod::bbar_identity: return "bbar_identity";
    }
    return "unknown";
}

const char* stop_name(StopReason s) {
    switch (s) {
        case StopReason::reached_t_max: return "reached_t_max";
        case StopReason::blow_up: return "blow_up";
        case StopReason::step_underflow: return "step_underflow";
        case StopReason::step_budget: return "step_budget";
    }
    return "unknown";
}

const char* tighter_name(TighterLower t) {
    switch (t) {
        case TighterLower::escape_bound: return "escape_bound";
        case TighterLower::submultiplicative: return "submultiplicative";
        case TighterLower::tie: return "tie";
        case TighterLower::unavailable: return "unavailable";
    }
    return "unknown";
}

class OutputDir {
public:
    explicit OutputDir(const std::string& dir, CommandOutput& out) : dir_(dir), out_(out) {
        fs::create_directories(dir_);
    }

    std::ofstream open(const std::string& name) {
        std::ofstream file(dir_ / name);
        if (!file) throw std::runtime_error("cannot write " + (dir_ / name).string());
        out_.files.push_back(name);
        return file;
    }

    void write_report(const std::string& command) {
        out_.report["files"] = out_.files;
        out_.report["warnings"] = out_.warnings;
        std::ofstream file = open(command + ".json");
        file << out_.report.dump(2) << '\n';
    }

private:
    fs::path dir_;
    CommandOutput& out_;
};

json explosion_json(const ExplosionReport& r) {
    json j{{"explodes", r.explodes},
           {"time", number(r.time)},
           {"method", method_name(r.method)},
           {"potential_limit", number(r.potential_limit)},
           {"intensity_limit", number(r.intensity_limit)},
           {"notes", r.notes}};
    j["bracket"] = r.bracket ? json::array({r.bracket->lo, r.bracket->hi}) : json(nullptr);
    return j;
}

json trajectory_json(const Trajectory& t) {
    json j{{"stop", stop_name(t.stop)},
           {"t_end", t.t_end()},
           {"y_end", number(t.y_end())},
           {"accepted_steps", t.stats.accepted},
           {"rejected_steps", t.stats.rejected}};
    if (t.blow_up)
        j["blow_up"] = {{"t_lo", t.blow_up->t_lo},
                        {"t_hi", t.blow_up->t_hi},
                        {"t_cross", t.blow_up->t_cross},
                        {"y_cap_hit", t.blow_up->y_cap_hit}};
    else
        j["blow_up"] = nullptr;
    return j;
}

void write_trajectory(std::ofstream& file, const Trajectory& t) {
    file << "t,Y,local_error\n";
    for (std::size_t i = 0; i < t.times.size(); ++i)
        file << csv_number(t.times[i]) << ',' << csv_number(t.values[i]) << ',' << csv_number(t.local_errors[i]) << '\n';
}

json bounds_json(const BoundReport& b) {
    return {{"lower_escape", b.lower_escape},
            {"upper", b.upper},
            {"lower_submultiplicative", number(b.lower_submultiplicative)},
            {"submultiplicative_constant", number(b.submultiplicative_constant)},
            {"tighter", tighter_name(b.tighter)},
            {"noise_sup", b.noise_sup},
            {"notes", b.notes}};
}

ProblemSpec with_sampled_noise(const ScenarioConfig& cfg, const ProblemSpec& p, double horizon) {
    auto path = std::make_shared<const NoisePath>(
        sample_path(horizon, cfg.simulation.dt, cfg.simulation.seed, cfg.noise.scale));
    return p.with_noise(FunctionSpec::brownian(std::move(path)));
}

double noiseless_explosion_time(const ProblemSpec& p, const char* command) {
    const ExplosionReport r = osgood_test(p, NoisePolicy::ignore_noise);
    if (!r.explodes)
        throw PreconditionError(std::string(command) + " needs a noiseless problem that explodes (B(inf) < A(inf))");
    return r.time;
}

json scenario_json(const ScenarioConfig& cfg) {
    json j = to_json(cfg);
    j.erase("output");
    return j;
}

}  // namespace

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CommandOutput cmd_osgood(const ScenarioConfig& cfg) {
    CommandOutput out;
    OutputDir dir(cfg.output_dir, out);
    const ProblemSpec p = cfg.problem();
    const ExplosionReport r = osgood_test(p, NoisePolicy::ignore_noise);
    out.report = {{"command", "osgood"}, {"scenario", scenario_json(cfg)}, {"osgood", explosion_json(r)}};

    const bool noisy = cfg.brownian_noise() || !p.noiseless();
    out.report["noisy_check"] = nullptr;
    if (!r.explodes && noisy) {
        const ProblemSpec with_noise = cfg.brownian_noise() ? with_sampled_noise(cfg, p, cfg.solver.t_max) : p;
        const Trajectory traj = solve_noisy(with_noise, cfg.solver);
        out.report["noisy_check"] = trajectory_json(traj);
        if (traj.blow_up) {
            out.warnings.push_back("the test ignores the noise and predicts no explosion, but the noisy solution "
                                   "blows up in [" + csv_number(traj.blow_up->t_lo) + ", " +
                                   csv_number(traj.blow_up->t_hi) + "]; run simulate for details");
        }
    }
    dir.write_report("osgood");
    return out;
}

CommandOutput cmd_bounds(const ScenarioConfig& cfg) {
    CommandOutput out;
    OutputDir dir(cfg.output_dir, out);
    ProblemSpec p = cfg.problem();
    out.report = {{"command", "bounds"}, {"scenario", scenario_json(cfg)}};
    double horizon = cfg.solver.t_max;
    if (cfg.brownian_noise()) {
        const double T = noiseless_explosion_time(p, "bounds");
        horizon = cfg.simulation.horizon.value_or(1.1 * T);
        p = with_sampled_noise(cfg, p, horizon);
        out.report["path"] = {{"seed", cfg.simulation.seed}, {"dt", cfg.simulation.dt}, {"horizon", horizon}};
    }
    const BoundReport b = explosion_time_bounds(p);
    out.report["bounds"] = bounds_json(b);

    SolveControls solve = cfg.solver;
    solve.t_max = horizon;
    const Trajectory traj = solve_noisy(p, solve);
    out.report["numeric"] = trajectory_json(traj);
    if (traj.blow_up) {
        const double width = traj.blow_up->width();
        const double te = traj.blow_up->midpoint();
        bool inside = b.lower_escape <= te + width && te <= b.upper + width;
        if (b.lower_submultiplicative) inside = inside && *b.lower_submultiplicative <= te + width;
        out.report["numeric_within_bounds"] = inside;
        if (!inside) out.warnings.push_back("numeric explosion time " + csv_number(te) + " lies outside the bounds");
    } else {
        out.report["numeric_within_bounds"] = nullptr;
    }
    dir.write_report("bounds");
    return out;
}

namespace {

void simulate_deterministic(const ScenarioConfig& cfg, CommandOutput& out, OutputDir& dir) {
    const ProblemSpec p = cfg.problem();
    const Trajectory traj = solve_noisy(p, cfg.solver);
    out.report["trajectory"] = trajectory_json(traj);
    {
        std::ofstream file = dir.open("trajectory.csv");
        write_trajectory(file, traj);
    }
    out.report["osgood_ignoring_noise"] = explosion_json(osgood_test(p, NoisePolicy::ignore_noise));
    out.report["identity_time"] = nullptr;
    out.report["bounds"] = nullptr;
    if (!traj.blow_up) return;
    try {
        out.report["identity_time"] = explosion_json(explosion_time_from_trajectory(p, traj));
    } catch (const PreconditionError& e) {
        out.report["identity_time"] = {{"unavailable", e.what()}};
    }
    try {
        out.report["bounds"] = bounds_json(explosion_time_bounds(p));
    } catch (const PreconditionError& e) {
        out.report["bounds"] = {{"unavailable", e.what()}};
    }
}

void simulate_brownian(const ScenarioConfig& cfg, CommandOutput& out, OutputDir& dir) {
    const ProblemSpec p = cfg.problem();
    const double T = noiseless_explosion_time(p, "simulate");
    const NormalConvention conv = cfg.analysis.convention;

    MonteCarloControls mc;
    mc.paths = cfg.simulation.paths;
    mc.horizon = cfg.simulation.horizon.value_or(1.1 * T);
    mc.dt = cfg.simulation.dt;
    mc.base_seed = cfg.simulation.seed;
    mc.noise_scale = cfg.noise.scale;
    mc.solve = cfg.solver;
    mc.threads = cfg.simulation.threads;
    mc.crossing_level = cfg.analysis.crossing_level;
    mc.hitting_level = cfg.analysis.hitting_level;
    mc.path_bounds = p.b_nondecreasing();
    const MonteCarloResult result = simulate_explosion_times(p, mc);

    std::size_t escape_violations = 0, upper_violations = 0, submult_violations = 0;
    {
        std::ofstream file = dir.open("paths.csv");
        file << "seed,censored,explosion_time,bracket_width,stop,noise_sup,escape_lower,submultiplicative_lower,"
                "crossing_time,hitting_time\n";
        for (const PathOutcome& o : result.outcomes) {
            file << o.seed << ',' << (o.censored ? 1 : 0) << ',' << csv_number(o.explosion_time) << ','
                 << csv_number(o.bracket_width) << ',' << stop_name(o.stop) << ','
                 << (mc.path_bounds ? csv_number(o.noise_sup) : std::string()) << ',' << csv_cell(o.escape_lower)
                 << ',' << csv_cell(o.submultiplicative_lower) << ',' << csv_cell(o.crossing_time) << ','
                 << csv_cell(o.hitting_time) << '\n';
            if (o.censored) continue;
            const double slack = o.bracket_width;
            if (o.escape_lower && *o.escape_lower > o.explosion_time + slack) ++escape_violations;
            if (o.explosion_time > T + slack) ++upper_violations;
            if (o.submultiplicative_lower && *o.submultiplicative_lower > o.explosion_time + slack)
                ++submult_violations;
        }
    }

    const std::size_t n = result.outcomes.size();
    std::size_t hit_before_T = 0;
    for (const PathOutcome& o : result.outcomes)
        if (o.hitting_time && *o.hitting_time < T) ++hit_before_T;
    std::vector<double> pra1_violations, pra2_violations, crack_violations;
    {
        std::ofstream file = dir.open("cdf.csv");
        file << "t,empirical,wilson_half_width,pra1,conditional_empirical,pra2,crossing_empirical,crack,convention\n";
        const unsigned k_max = cfg.simulation.grid_points;
        for (unsigned k = 1; k <= k_max; ++k) {
            const double t = T * k / (k_max + 1.0);
            std::optional<double> cond_emp, pra2, cross_emp, crack;
            if (cfg.analysis.hitting_level) {
                if (hit_before_T > 0) {
                    std::size_t count = 0;
                    for (const PathOutcome& o : result.outcomes)
                        if (o.hitting_time && *o.hitting_time < T && !o.censored && o.explosion_time <= t) ++count;
                    cond_emp = static_cast<double>(count) / hit_before_T;
                }
                pra2 = conditional_explosion_bound(p, t, *cfg.analysis.hitting_level, T, conv);
            }
            if (cfg.analysis.crossing_level) {
                std::size_t count = 0;
                for (const PathOutcome& o : result.outcomes)
                    if (o.crossing_time && *o.crossing_time <= t) ++count;
                cross_emp = static_cast<double>(count) / n;
                crack = crossing_probability_bound(p, t, *cfg.analysis.crossing_level, T, conv);
            }
            const double pra1 = explosion_probability_bound(p, t, T, conv);
            auto exceeds = [](double emp, double bound, double count) {
                return emp > bound + 3.0 * std::sqrt(emp * (1.0 - emp) / count);
            };
            if (exceeds(result.cdf(t), pra1, n)) pra1_violations.push_back(t);
            if (cond_emp && exceeds(*cond_emp, *pra2, hit_before_T)) pra2_violations.push_back(t);
            if (cross_emp && exceeds(*cross_emp, *crack, n)) crack_violations.push_back(t);
            file << csv_number(t) << ',' << csv_number(result.cdf(t)) << ','
                 << csv_number(result.cdf.wilson_half_width(t)) << ',' << csv_number(pra1) << ',' << csv_cell(cond_emp) << ','
                 << csv_cell(pra2) << ',' << csv_cell(cross_emp) << ',' << csv_cell(crack) << ','
                 << to_string(conv) << '\n';
        }
    }

    MonteCarloControls first = mc;
    first.paths = 1;
    first.threads = 1;
    first.path_bounds = false;
    first.keep_trajectories = true;
    const MonteCarloResult base = simulate_explosion_times(p, first);
    {
        std::ofstream file = dir.open("trajectory.csv");
        write_trajectory(file, base.trajectories.front());
    }

    out.report["noiseless_explosion_time"] = T;
    out.report["monte_carlo"] = {{"paths", n},
                                 {"censored", result.censored},
                                 {"horizon", mc.horizon},
                                 {"dt", mc.dt},
                                 {"base_seed", mc.base_seed},
                                 {"convention", std::string(to_string(conv))},
                                 {"paths_hitting_level_before_T",
                                  cfg.analysis.hitting_level ? json(hit_before_T) : json(nullptr)}};
    // Grid times where the empirical frequency exceeds the bound by more than 3 standard errors.
    out.report["bound_violations"] = {{"convention", std::string(to_string(conv))},
                                      {"pra1", pra1_violations},
                                      {"pra2", pra2_violations},
                                      {"crack", crack_violations}};
    if (!pra1_violations.empty() || !pra2_violations.empty() || !crack_violations.empty())
        out.warnings.push_back("empirical frequencies exceed a probability bound under the " +
                               std::string(to_string(conv)) + " convention; see bound_violations");
    json sandwich = nullptr;
    if (mc.path_bounds)
        sandwich = {{"escape_lower_violations", escape_violations},
                    {"upper_violations", upper_violations},
                    {"submultiplicative_violations", submult_violations}};
    out.report["sandwich"] = sandwich;
    if (escape_violations + upper_violations + submult_violations > 0)
        out.warnings.push_back("some uncensored paths violate the path-wise bounds; see paths.csv");
    if (result.censored > 0)
        out.warnings.push_back(std::to_string(result.censored) + " of " + std::to_string(n) +
                               " paths did not blow up before the horizon");
}

}  // namespace

CommandOutput cmd_simulate(const ScenarioConfig& cfg) {
    CommandOutput out;
    OutputDir dir(cfg.output_dir, out);
    out.report = {{"command", "simulate"}, {"scenario", scenario_json(cfg)}};
    if (cfg.brownian_noise())
        simulate_brownian(cfg, out, dir);
    else
        simulate_deterministic(cfg, out, dir);
    dir.write_report("simulate");
    return out;
}

CommandOutput cmd_paris(const ScenarioConfig& cfg) {
    if (cfg.intensity.kind != "constant")
        throw PreconditionError("paris needs a constant intensity, got '" + cfg.intensity.kind + "'");
    if (cfg.drift.kind != "power" || !(cfg.drift.p > 1.0))
        throw PreconditionError("paris needs a power drift k*s^(1+alpha) with alpha > 0");
    CommandOutput out;
    OutputDir dir(cfg.output_dir, out);

    const PowerLawModel model{cfg.drift.p - 1.0, cfg.intensity.k * cfg.drift.k, cfg.x0};
    const NormalConvention conv = cfg.analysis.convention;
    const double q = cfg.analysis.quantile;
    const double T = model.explosion_time();
    const ExplosionReport numeric = osgood_test(model.problem());

    out.report = {{"command", "paris"},
                  {"scenario", scenario_json(cfg)},
                  {"alpha", model.alpha},
                  {"a0", model.a0},
                  {"x0", model.x0},
                  {"explosion_time", T},
                  {"explosion_time_quadrature", number(numeric.time)},
                  {"convention", std::string(to_string(conv))},
                  {"quantile", q}};
    if (cfg.noise.kind != "brownian") out.warnings.push_back("paris assumes Brownian noise; the noise entry is ignored");

    json maintenance{{"time", nullptr}, {"bound_at_time", nullptr}, {"reason", nullptr}};
    try {
        const double t = model.maintenance_time(q, conv);
        maintenance["time"] = number(t);
        if (t < T) maintenance["bound_at_time"] = model.escape_bound(t, conv);
    } catch (const OutOfRangeError& e) {
        maintenance["reason"] = e.what();
    }
    out.report["maintenance"] = maintenance;

    auto smaller = [](double escape, double submult) {
        return escape < submult ? "escape" : submult < escape ? "submultiplicative" : "tie";
    };
    {
        std::ofstream file = dir.open("curves.csv");
        file << "t,escape_bound,submultiplicative_bound,smaller\n";
        const unsigned k_max = cfg.simulation.grid_points;
        for (unsigned k = 1; k <= k_max; ++k) {
            const double t = T * k / (k_max + 1.0);
            const double escape = model.escape_bound(t, conv);
            const double submult = model.submultiplicative_bound(t, conv);
            file << csv_number(t) << ',' << csv_number(escape) << ',' << csv_number(submult) << ',' << smaller(escape, submult)
                 << '\n';
        }
    }
    std::size_t escape_smaller = 0, submultiplicative_smaller = 0, ties = 0;
    {
        std::ofstream file = dir.open("comparison.csv");
        file << "alpha,a0,x0,t_over_T,escape_bound,submultiplicative_bound,smaller\n";
        for (double alpha : {0.5, 1.0, 2.0})
            for (double a0 : {0.5, 1.0, 2.0})
                for (double x0 : {0.5, 1.0, 2.0}) {
                    const PowerLawModel m{alpha, a0, x0};
                    for (int k = 1; k <= 9; ++k) {
                        const double frac = k / 10.0;
                        const double t = frac * m.explosion_time();
                        const double escape = m.escape_bound(t, conv);
                        const double submult = m.submultiplicative_bound(t, conv);
                        const std::string who = smaller(escape, submult);
                        (who == "escape" ? escape_smaller : who == "submultiplicative" ? submultiplicative_smaller : ties)++;
                        file << csv_number(alpha) << ',' << csv_number(a0) << ',' << csv_number(x0) << ','
                             << csv_number(frac) << ',' << csv_number(escape) << ',' << csv_number(submult) << ',' << who
                             << '\n';
                    }
                }
    }
    out.report["comparison"] = {{"escape_smaller", escape_smaller}, {"submultiplicative_smaller", submultiplicative_smaller}, {"ties", ties}};
    dir.write_report("paris");
    return out;
}

}  // namespace blowup::cli
