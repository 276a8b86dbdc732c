#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clab::cli {

inline constexpr const char* kSchema = "choquet-lab/1";

enum ExitCode : int { kSuccess = 0, kFailure = 1, kViolation = 2 };

/// Runs one command line (without the program name). The JSON report goes to
/// --out when given, otherwise to `out`; configuration errors produce a
/// single diagnostic line on `err` and exit code 1.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace clab::cli
