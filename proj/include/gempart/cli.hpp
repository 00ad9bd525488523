#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gempart {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCap = 3;

inline constexpr unsigned long long kDefaultSeed = 42;

/// Command-line entry point. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gempart
