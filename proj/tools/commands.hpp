#pragma once

#include <string>
#include <vector>

namespace heunpulse::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kNumeric = 2,
  kVerification = 3,
};

/// Parses argv, runs one subcommand and maps library exceptions to exit codes.
int run(int argc, char** argv);

/// "%.17g" rendering shared by every CSV writer.
std::string format_number(double x);

/// Joins already formatted fields with ',' (no trailing delimiter).
std::string csv_row(const std::vector<double>& fields);

}  // namespace heunpulse::cli
