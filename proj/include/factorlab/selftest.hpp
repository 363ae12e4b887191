#pragma once

#include <string>
#include <vector>

#include "factorlab/coinvariants.hpp"

namespace factorlab {

// One verified invariant: zero violations or a description of the first one.
struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  long checks = 0;  // individual exact assertions performed
  std::string detail;
};

// The invariant suites of every module, run on the standard desk-scale
// instances with a fixed seed. All assertions are exact; a single violation
// fails the suite.
std::vector<CheckResult> run_property_suites(std::uint64_t seed = 20030301);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace factorlab
