#pragma once

#include <iosfwd>

namespace captchalab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point for the `captchalab` executable: generate | train | break |
// extgen | serve | report. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace captchalab::cli
