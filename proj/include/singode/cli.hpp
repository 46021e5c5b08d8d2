#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace singode {

/// Exit codes. analyze maps verdicts to 0 / 10 / 20.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitConditional = 10;
inline constexpr int kExitInconclusive = 20;

/// Runs one command line; argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace singode
