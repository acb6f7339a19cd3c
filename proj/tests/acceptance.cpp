// Runs every acceptance criterion once and prints one PASS/FAIL line each.

#include "tensorial/reproduce.hpp"

#include <cstdio>

int main() {
  using namespace tensorial;
  Report r = reproduce_suite(1);
  for (const CheckRecord& c : r.checks) {
    std::printf("%s criterion %2d: %s (%.2fs cpu)\n", c.pass ? "PASS" : "FAIL", c.id, c.anchor.c_str(), c.cpu_seconds);
    std::printf("    values: %s\n", c.values.dump().c_str());
    if (!c.error.empty()) std::printf("    error: %s\n", c.error.c_str());
  }
  std::printf("%s: %zu criteria, %.1fs wall\n", r.all_pass() ? "ALL PASS" : "FAILURES", r.checks.size(), r.wall_seconds);
  return r.all_pass() ? 0 : 1;
}
