#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace horo::cli {

enum Exit { Ok = 0, AssertionFailed = 1, UsageError = 2 };

/// Runs one subcommand; artifacts go to files or `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace horo::cli
