#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpcp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataError = 2;

// Parses `args` (args[0] is the program name), runs the subcommand and
// returns the process exit code. Observations are read from `in` unless
// --in names a file. Output is a pure function of (args, input bytes).
int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace dpcp::cli
