#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hubeval::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs one command. `args` excludes the program name. Query commands print to
/// `out`; artifact commands write under the output directory and print a short
/// summary. Failures print a one-line JSON error record to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hubeval::cli
