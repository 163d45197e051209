#include <cstdio>
#include <cstdlib>
#include <string>

#include "rotor/acceptance.hpp"

// Usage: acceptance [criterion ids...]
int main(int argc, char** argv) {
  rotor::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
  opts.on_report = [](const rotor::CriterionReport& r) {
    std::printf("%s criterion %d: %s (%.1f s)\n", r.passed() ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
    for (const auto& c : r.checks) {
      if (c.relation == "within")
        std::printf("    [%s] %s = %.10g (target %.6g +- %.3g)\n", c.passed ? "ok" : "x", c.name.c_str(), c.value,
                    c.target, c.bound);
      else
        std::printf("    [%s] %s = %.10g %s %.6g\n", c.passed ? "ok" : "x", c.name.c_str(), c.value,
                    c.relation.c_str(), c.bound);
    }
    if (!r.error.empty()) std::printf("    error: %s\n", r.error.c_str());
    std::fflush(stdout);
  };
  const auto reports = rotor::run_acceptance(opts);
  int failed = 0;
  for (const auto& r : reports) failed += !r.passed();
  std::printf("%zu criteria, %d failed\n", reports.size(), failed);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
