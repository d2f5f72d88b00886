#pragma once

#include <string>
#include <vector>

namespace padrig {

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::size_t checks = 0;
  double milliseconds = 0;
  std::string counterexample;  // first failure, empty on pass
};

/// Runs the bundled invariant suites at reduced sizes with a fixed seed.
std::vector<SuiteResult> run_selftest();

/// Aligned summary: one line per suite, then totals and the first counterexample.
std::string format_selftest(const std::vector<SuiteResult>& results);

}  // namespace padrig
