#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sensorplace::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       ///< bad flags, unreadable or invalid instance file
  kInfeasible = 2,  ///< no budget-respecting placement exists
  kMismatch = 3,    ///< `verify` found a solver/oracle disagreement
  kNumerical = 4,   ///< divergence or closed-loop instability
};

/// Runs one command. `args` excludes the program name. The structured report
/// goes to `out`, the human summary and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sensorplace::cli
