#pragma once

// The qlat command line: argument parsing, dispatch to the modules, JSON or
// table output, and the exit-code contract
//   0 success / true, 3 semantic negative, 2 resource or precision failure,
//   1 usage or input format error.

#include <iosfwd>
#include <string>
#include <vector>

namespace qlat {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitResource = 2, kExitNegative = 3 };

/// args excludes the program name. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlat
