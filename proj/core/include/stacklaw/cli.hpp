#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stacklaw {

/// Exit codes for the stacklaw CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitInfeasible = 1,
  kExitUsage = 2,
  kExitInternal = 3,
};

/// Run the CLI against explicit streams (results to out, diagnostics to
/// err). args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

/// main()-shaped wrapper over stdout/stderr.
int run_cli(int argc, const char* const* argv);

} // namespace stacklaw
