#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ispec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;

// Parses argv-style arguments (without the program name) and runs the
// command. Results go to out unless --output names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ispec::cli
