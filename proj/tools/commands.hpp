#pragma once

#include <iosfwd>

namespace sigens::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_numerical = 2,
    exit_not_converged = 3,
};

/// Parses argv, runs one subcommand, and returns its exit code. Diagnostics
/// go to `err`, human-readable results to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sigens::cli
