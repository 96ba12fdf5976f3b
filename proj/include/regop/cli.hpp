#pragma once

// Command-line front end. Every command writes one report (JSON unless
// --format csv) to --out or to `out`, and is a pure function of its flags.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
// 3 input or numerical error. Errors print one line "error: <kind>: <msg>".

#include <iosfwd>
#include <string>
#include <vector>

namespace regop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitError = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regop::cli
