#pragma once

#include <ostream>

namespace posers::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsageOrIo = 1, kForged = 2, kInconclusive = 3 };

/// Entry point of the `posers` tool; all output goes to `out` / `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace posers::cli
