#pragma once

#include <iosfwd>

namespace localmath::cli {

/// Exit codes: 0 all checks pass, 1 a check failed or a scenario errored,
/// 2 the config is invalid or unreadable.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Output directory override, below --set and --output-dir.
inline constexpr const char* kOutputDirEnv = "LOCALMATH_OUTPUT_DIR";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace localmath::cli
