#pragma once

#include <iosfwd>

namespace svlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitProperty = 4;

// Entry point of the `svlab` tool. Never throws; failures map to the exit codes above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace svlab
