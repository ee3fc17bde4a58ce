#pragma once

#include <ostream>
#include <string_view>

namespace medrisk::cli {

inline constexpr std::string_view kVersion = "1.0.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kNumerical = 3,
    kNotReached = 4,
};

/// Entry point of the `medrisk` tool. CSV goes to `out` unless --out names
/// a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace medrisk::cli
