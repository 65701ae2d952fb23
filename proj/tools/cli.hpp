#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace radlap::cli {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { ok = 0, check_failed = 1, invalid = 2, not_converged = 3 };

/// Runs one subcommand. args excludes the program name.
/// Output goes to `out` unless --out is given, in which case the file is
/// written atomically. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count: hardware concurrency capped by RADLAP_THREADS.
unsigned thread_count();

}  // namespace radlap::cli
