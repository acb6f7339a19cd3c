#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tensorial {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;  // certify rejected, or a reproduce check failed
inline constexpr int kExitUsage = 2;     // bad arguments, unreadable input, unmet precondition
inline constexpr int kExitNumeric = 3;   // numerical failure or a size/iteration cap

/// args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tensorial
