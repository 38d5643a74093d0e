#pragma once

#include <iosfwd>

namespace lexent::cli {

// Exit status of every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kRuntimeFailure = 1,
  kUsageError = 2,
};

// Parses argv and runs one subcommand. Output goes to `out`, diagnostics to
// `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace lexent::cli
