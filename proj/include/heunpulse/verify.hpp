#pragma once

// Acceptance checks: each one runs a self-contained computation and compares
// it with an independent oracle.

#include <functional>
#include <string>
#include <vector>

namespace heunpulse::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  double runtime_s = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool overall() const;
  /// {"schema_version": 1, "overall": ..., "checks": [...]} with stable key order.
  std::string to_json() const;
};

struct Check {
  std::string name;
  std::string description;
  std::function<CheckResult()> run;
};

/// The ten checks, in order.
const std::vector<Check>& checks();

/// Runs every check; a check that throws is recorded as failed with the
/// exception text in `detail`.
VerificationReport run_all();

CheckResult run_check(const Check& check);

/// "[PASS] name  max_error=... tolerance=... (runtime s)  detail".
std::string format_line(const CheckResult& r);

}  // namespace heunpulse::verify
