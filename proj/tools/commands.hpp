#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "scenario.hpp"

namespace blowup::cli {

/// What a subcommand produced. The report is also written to <out>/<command>.json.
struct CommandOutput {
    nlohmann::json report;
    std::vector<std::string> warnings;
    std::vector<std::string> files;  ///< written files, relative to the output directory
};

CommandOutput cmd_osgood(const ScenarioConfig& config);
CommandOutput cmd_bounds(const ScenarioConfig& config);
CommandOutput cmd_simulate(const ScenarioConfig& config);
CommandOutput cmd_paris(const ScenarioConfig& config);

/// Fixed-width formatting shared by every CSV writer: %.12g, "inf" for +∞, empty for missing.
std::string csv_number(double v);

}  // namespace blowup::cli
