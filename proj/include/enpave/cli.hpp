#ifndef ENPAVE_CLI_HPP
#define ENPAVE_CLI_HPP

#include <iosfwd>

namespace enpave {

/// Exit codes of the command line front end.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2 };

/// Runs `enpave <subcommand> [flags]`: orbits, fiber-poly, check, closure-order.
/// Tables go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace enpave

#endif  // ENPAVE_CLI_HPP
