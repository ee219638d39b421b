#pragma once

#include <iosfwd>

namespace filterint::cli {

inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_unknown = 2;
inline constexpr int exit_usage = 64;

/// Runs one command line; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace filterint::cli
