#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "wva_app/config.hpp"

namespace wva::app {

const std::vector<std::string>& subcommand_names();

// Runs one subcommand, writing artifacts to config.output.directory. Returns the process exit status:
// 0 success, 1 computational or validation failure.
int run_subcommand(const std::string& name, const ScenarioConfig& config, std::ostream& out, std::ostream& err);

}  // namespace wva::app
