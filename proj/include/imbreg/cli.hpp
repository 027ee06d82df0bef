#pragma once

#include <iosfwd>

namespace imbreg {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitRuntime = 4 };

/// Entry point of the `imbreg` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace imbreg
