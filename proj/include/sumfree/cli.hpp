#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sumfree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line. `args` excludes the program name. Subcommands:
// theta, pi, behrend, construct, verify, expect, table.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumfree::cli
