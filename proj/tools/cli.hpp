#pragma once

#include <iosfwd>

namespace wilson::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSingular = 2;
inline constexpr int kExitSelftest = 3;

/// Entry point of the `wilson` tool. argv[0] is the program name. All output
/// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace wilson::cli
