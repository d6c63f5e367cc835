#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "blowup/dynamics.hpp"
#include "blowup/stochastic.hpp"
#include "blowup/transforms.hpp"

namespace blowup::cli {

/// Malformed or invalid scenario file; the message names the line or field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Catalog function as written in a scenario file.
struct FunctionConfig {
    std::string kind = "zero";  ///< zero | constant | power | shifted_power | exponential | brownian
    double k = 0.0;
    double p = 0.0;
    double s0 = 0.0;
    double c = 0.0;
    double scale = 1.0;  ///< brownian only: g = scale·|W|

    bool operator==(const FunctionConfig&) const = default;
};

struct SimulationConfig {
    std::size_t paths = 1000;
    double dt = 1e-3;
    std::optional<double> horizon;  ///< defaults to 1.1·T
    std::uint64_t seed = 1;
    unsigned threads = 0;
    unsigned grid_points = 9;  ///< evaluation times k·T/(grid_points+1)

    bool operator==(const SimulationConfig&) const = default;
};

struct AnalysisConfig {
    NormalConvention convention = NormalConvention::centered;
    double quantile = 0.95;
    std::optional<double> crossing_level;  ///< L for the crossing bound
    std::optional<double> hitting_level;   ///< r for the conditional bound

    bool operator==(const AnalysisConfig&) const = default;
};

struct ScenarioConfig {
    double x0 = 1.0;
    FunctionConfig intensity;
    FunctionConfig drift;
    FunctionConfig noise;
    Tolerances tolerances;
    SolveControls solver;
    SimulationConfig simulation;
    AnalysisConfig analysis;
    std::string output_dir = "out";

    bool operator==(const ScenarioConfig& other) const;

    bool brownian_noise() const { return noise.kind == "brownian"; }
    /// The problem with the deterministic noise, or g ≡ 0 for Brownian noise.
    ProblemSpec problem() const;
};

/// Parses a scenario, rejecting unknown keys and invalid values.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& config);

FunctionSpec to_function(const FunctionConfig& f, const std::string& field);

}  // namespace blowup::cli
