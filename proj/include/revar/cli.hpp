#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace revar {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitWarnings = 1;
inline constexpr int kExitError = 2;

/// Runs the command line tool. `args` excludes the program name. The default
/// output directory comes from REVAR_OUTPUT_DIR when --out is absent.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace revar
