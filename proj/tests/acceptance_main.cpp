// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances live with the criteria themselves (exact rational comparisons, a
// 1e-9 singular-value ratio and 1e-8 containment residual in float mode).

#include <iostream>

#include <cachenet/acceptance.hpp>

int main() {
  cachenet::acceptance::BatteryOptions options;
  options.quick = true;
  auto results = cachenet::acceptance::run_battery({}, options);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << cachenet::acceptance::format_line(r) << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
