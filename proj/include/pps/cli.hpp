#pragma once

#include <iosfwd>

namespace pps {

// Exit codes: 0 success, 2 usage or I/O error, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Entry point of the `pps` tool: gen, solve, recover, eval, prcurve, bench.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pps
