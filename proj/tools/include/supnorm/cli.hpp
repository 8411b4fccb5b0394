#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace supnorm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalid = 2;

/// Runs the command-line tool on `args` (without the program name). Returns
/// the process exit status: 0 on success, 2 on invalid input or flags, 1 on
/// an internal error. Test decisions are written to the output files only.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace supnorm
