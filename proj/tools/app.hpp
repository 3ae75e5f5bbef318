#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace amc::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `amc` command line: parses argv, runs the subcommand
/// and returns the process exit code. Never throws.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amc::app
