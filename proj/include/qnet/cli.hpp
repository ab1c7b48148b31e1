#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qnet::cli {

/// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSimulationFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// `out` unless the scenario names an output file; diagnostics and the seed
/// line go to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnet::cli
