#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xrsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// Entry point behind the xrsim binary. args[0] is the program name.
// Reports go to --out (atomically) or to `out` when no path is given;
// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xrsim::cli
