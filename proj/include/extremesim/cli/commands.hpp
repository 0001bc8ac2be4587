#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace extremesim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSpecError = 2;
inline constexpr int kExitValidityBreach = 3;
inline constexpr int kExitValidationFail = 4;

/// Full command-line entry point. `args` excludes the program name. Data goes
/// to `out` (unless --out names a file); summaries and diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace extremesim::cli
