#pragma once

#include <string>
#include <vector>

namespace odeident {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Property suites of every module, with fixed seeds.
std::vector<CheckResult> run_selftest(int threads = 1);

}  // namespace odeident
