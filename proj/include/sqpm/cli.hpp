#pragma once

#include <iosfwd>

namespace sqpm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitError = 2;

/// Runs the command line against the given streams and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sqpm::cli
