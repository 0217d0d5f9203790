#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace hyperspec::selftest {

struct CaseResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::vector<std::string> details;
};

struct Case {
  std::string name;
  std::string summary;
  bool in_default_suite = true;
  std::function<CaseResult()> run;
};

/// Oracle-vs-solver cases; the default suite is the acceptance gate.
const std::vector<Case>& all_cases();

/// Runs the named cases (the default suite when `names` is empty), printing
/// one PASS/FAIL line per case followed by its details. Returns true if all
/// cases passed. Throws std::invalid_argument for an unknown case name.
bool run_cases(const std::vector<std::string>& names, std::ostream& out, bool verbose = true);

}  // namespace hyperspec::selftest
