#pragma once

#include <iosfwd>

namespace lorenz_lab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPipelineError = 1;
inline constexpr int kExitUsageError = 2;

/// Entry point of the `lorenz-lab` command. Reports go to `out`, JSON error
/// objects and help text to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lorenz_lab
