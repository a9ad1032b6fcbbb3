#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnsl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoIncumbent = 3;

/// Runs one command line (args[0] is the program name). Data goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bnsl::cli
