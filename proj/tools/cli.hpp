#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scimap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand.  `args` excludes the program name.  Returns 0 on
/// success, 1 on a data error and 2 on a usage error.
int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scimap::cli
