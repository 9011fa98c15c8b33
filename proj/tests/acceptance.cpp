// One line per acceptance criterion; exits 1 if any criterion fails.

#include <cstdio>

#include "heunpulse/verify.hpp"

int main() {
  using namespace heunpulse::verify;
  bool ok = true;
  int index = 1;
  for (const auto& c : checks()) {
    const CheckResult r = run_check(c);
    std::printf("%2d %s\n", index++, format_line(r).c_str());
    std::fflush(stdout);
    ok = ok && r.passed;
  }
  std::printf("acceptance: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}
