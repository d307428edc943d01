#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cwish::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitResourceError = 3;

/// Runs the `wishart` command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cwish::cli
