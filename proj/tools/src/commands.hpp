#pragma once

#include <string_view>
#include <vector>

#include "config.hpp"

namespace morphkit::cli {

/// Subcommand names in pipeline order.
const std::vector<std::string_view>& command_names();
std::string_view command_help(std::string_view name);

/// Runs one subcommand. Errors surface as morphkit::Error.
void run_command(std::string_view name, const RunConfig& config);

}  // namespace morphkit::cli
