// End-to-end acceptance run: every check of the verification suite, one
// line per criterion. Exits nonzero when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "d4dr/verify.hpp"

int main() {
  int jobs = 1;
  if (const char* env = std::getenv("D4DR_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) jobs = v;
  }

  std::vector<d4dr::CheckResult> results;
  try {
    results = d4dr::run_suite("all", jobs);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 1;
  }

  bool all_pass = true;
  for (size_t i = 0; i < results.size(); ++i) {
    const d4dr::CheckResult& r = results[i];
    std::printf("criterion %zu [%s] %s: %s (%.1fs)\n", i + 1,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                r.seconds);
    std::fflush(stdout);
    if (!r.pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}
