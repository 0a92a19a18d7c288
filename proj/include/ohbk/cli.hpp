#pragma once

#include <ostream>
#include <span>
#include <string>

namespace ohbk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotAdmissible = 2;

/// Runs one command line (without the program name), writing CSV either to
/// the --out file or to `out`, and diagnostics to `err`. Returns the exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// 17 significant digits; round-trips every finite double.
std::string format_value(double value);

}  // namespace ohbk::cli
