#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace pwm_cli {

const std::vector<std::string>& command_names();

/// Runs one subcommand; returns 0 when every check passes and 1 otherwise. Throws ConfigError
/// for configuration problems.
int run_command(const std::string& name, Scenario& sc, const std::filesystem::path& out);

}  // namespace pwm_cli
