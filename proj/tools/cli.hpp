#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twothree::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFalse = 1;
inline constexpr int kUsage = 2;

// Runs one command. `args` excludes the program name. `in` backs the "-"
// file argument.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace twothree::cli
