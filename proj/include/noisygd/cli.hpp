#pragma once

#include <iosfwd>
#include <string>

namespace noisygd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitVerdict = 4;
inline constexpr int kExitIo = 5;

// One double as text with 17 significant digits (round-trip exact).
std::string format17(double v);

// Full command-line front end; returns the process exit code. All CSV goes
// to `out` unless an --output path is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace noisygd::cli
