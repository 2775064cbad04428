#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cyclosc::cli {

// Exit statuses besides the verdict codes 0/1/2.
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitSoftware = 70;
inline constexpr int kExitCantCreate = 73;

/// Run the command line `args` (args[0] is the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace cyclosc::cli
