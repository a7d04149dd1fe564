#pragma once

#include <ostream>

namespace passivity {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;

/// Entry point of the command-line tool. Reports go to `out` (or --out),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace passivity
