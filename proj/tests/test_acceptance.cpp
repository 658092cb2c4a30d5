#include <cstdio>

#include "jetflat/cli.hpp"

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
int main() {
  int failed = 0;
  for (const auto& c : jetflat::cli::run_acceptance(42)) {
    std::printf("%s criterion %2d (%s): %s [%.2fs]\n", c.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                c.detail.c_str(), c.seconds);
    failed += !c.passed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
