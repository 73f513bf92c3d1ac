#pragma once

#include <ostream>

namespace metasymp::cli {

// Exit codes.
inline constexpr int kPass = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kDomain = 3;

/// Runs one invocation; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace metasymp::cli
