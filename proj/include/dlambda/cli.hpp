#pragma once

#include <ostream>

namespace dlambda {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSolver = 2, kExitChecksFailed = 3 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "DLAMBDA_OUTPUT_DIR";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dlambda
