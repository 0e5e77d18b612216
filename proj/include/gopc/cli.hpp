#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gopc::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kIoError = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kMismatch = 3;

/// Runs one command line (args excludes the program name). JSON results and
/// --verbose text go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gopc::cli
