#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ripkit {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // assertion, soundness or condition failure
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

// Runs the command line `args` (without the program name). The enumeration
// budget defaults to 10^6 and can be overridden with RIPKIT_BUDGET.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ripkit
