#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qiso::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kViolation = 2;

/// Runs one CLI invocation. `args` excludes the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qiso::cli
