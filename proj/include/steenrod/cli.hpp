#ifndef STEENROD_CLI_HPP
#define STEENROD_CLI_HPP

#include <ostream>

namespace steenrod {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitIncomplete = 3 };

/// Entry point of the `steenrod` tool. All output goes to `out` and `err`,
/// so tests can drive it in process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace steenrod

#endif // STEENROD_CLI_HPP
