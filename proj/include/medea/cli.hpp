#pragma once

#include <string>
#include <vector>

namespace medea::cli {

/// Run the command line given argv-style arguments (without the program
/// name). Exit codes: 0 success, 1 input error, 2 infeasible deadline,
/// 3 validation failure.
int run(const std::vector<std::string>& args);

}  // namespace medea::cli
