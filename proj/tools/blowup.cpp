#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "blowup/errors.hpp"
#include "commands.hpp"
#include "scenario.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, precondition = 2, numerical = 3 };

}  // namespace

int main(int argc, char** argv) {
    using namespace blowup;

    CLI::App app{"Explosion-time analysis for dX = a(t) b(X) dt + dg"};
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> convention;
    std::optional<double> quantile;
    app.add_option("--config", config_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--seed", seed, "random seed (overrides simulation.seed)");
    app.add_option("--convention", convention, "centered|cdf (overrides analysis.convention)");
    app.add_option("--quantile", quantile, "maintenance quantile (overrides analysis.quantile)");

    auto* osgood = app.add_subcommand("osgood", "Osgood test on the noiseless problem");
    auto* bounds = app.add_subcommand("bounds", "two-sided explosion-time bounds");
    auto* simulate = app.add_subcommand("simulate", "numeric trajectory or Monte Carlo explosion times");
    auto* paris = app.add_subcommand("paris", "closed-form power-law example and bound comparison");
    for (auto* sub : {osgood, bounds, simulate, paris}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    cli::ScenarioConfig cfg;
    try {
        cfg = cli::load_scenario(config_path);
        if (out_dir) cfg.output_dir = *out_dir;
        if (seed) cfg.simulation.seed = *seed;
        if (convention) {
            try {
                cfg.analysis.convention = parse_convention(*convention);
            } catch (const Error& e) {
                throw cli::ConfigError(std::string("--convention: ") + e.what());
            }
        }
        if (quantile) {
            if (!(*quantile > 0.0 && *quantile < 1.0)) throw cli::ConfigError("--quantile: must lie in (0, 1)");
            cfg.analysis.quantile = *quantile;
        }
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }

    try {
        cli::CommandOutput out;
        if (*osgood)
            out = cli::cmd_osgood(cfg);
        else if (*bounds)
            out = cli::cmd_bounds(cfg);
        else if (*simulate)
            out = cli::cmd_simulate(cfg);
        else
            out = cli::cmd_paris(cfg);
        for (const std::string& w : out.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << out.report.dump(2) << '\n';
        return ok;
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << '\n';
        return precondition;
    } catch (const OutOfRangeError& e) {
        std::cerr << "out of range: " << e.what() << '\n';
        return precondition;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return precondition;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const NonMonotoneError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
}
