#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ofifs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Returns the process
/// exit status: 0 all-pass, 1 check failure or budget exhaustion, 2 usage or
/// config error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ofifs::cli
