#pragma once

#include <string>
#include <vector>

namespace d4dr {

// One verification check: a named comparison of engine output against a
// frozen reference, with a short report. `error` marks an internal failure
// (exception) as opposed to a clean mismatch.
struct CheckResult {
  std::string name;
  bool pass = false;
  bool error = false;
  std::string detail;
  double seconds = 0.0;
};

// the individual check names, in report order
std::vector<std::string> suite_names();

// Runs a suite and returns one result per check. Accepted suites: "all",
// the groups "ds", "dr", "quantum", "properties", or any single check name.
// `jobs` bounds the worker threads used for independent sub-checks; results
// do not depend on it. Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& suite, int jobs = 1);

}  // namespace d4dr
