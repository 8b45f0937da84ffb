#pragma once

#include <iosfwd>

namespace traceexpr::cli {

enum ExitCode : int { kSuccess = 0, kNegative = 1, kInconclusive = 2, kUsage = 3 };

/// Runs one command line; the ResultDoc goes to out, diagnostics to err.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace traceexpr::cli
