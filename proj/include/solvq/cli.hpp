#pragma once

#include <string>
#include <vector>

namespace solvq {

/// Subcommand dispatch for the solvq tool. Returns the process exit code:
/// 0 success, 1 error, 2 when --strict is set and the only verdicts are
/// Inconclusive.
int run_cli(const std::vector<std::string>& args);

}  // namespace solvq
