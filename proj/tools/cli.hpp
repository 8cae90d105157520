#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ltlab::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolated = 1;
inline constexpr int kUsage = 2;
inline constexpr int kNumeric = 3;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ltlab::cli
