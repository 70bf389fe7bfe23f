#pragma once

#include <iosfwd>

namespace scpw {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitInvalid = 2 };

/// Entry point of the `scpw` tool. Normal output goes to `out`; errors are
/// written to `err` as a single JSON object.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace scpw
