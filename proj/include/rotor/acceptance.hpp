#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rotor/propagator.hpp"

namespace rotor {

/// One measured quantity against its bound. `relation` is one of
/// "<", "<=", ">", ">=" or "within" (|value - target| <= tolerance).
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;
  double bound = 0.0;
  double target = 0.0;  // for "within"
  bool passed = false;
};

Check check_less(std::string name, double value, double bound);
Check check_at_most(std::string name, double value, double bound);
Check check_greater(std::string name, double value, double bound);
Check check_within(std::string name, double value, double target, double tolerance);
Check check_true(std::string name, bool condition);

struct CriterionReport {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::string error;  // exception text if the criterion threw
  double seconds = 0.0;

  bool passed() const;
};

/// Worst-case numerical diagnostics gathered from every run of the suite.
struct Hygiene {
  double max_trace_drift = 0.0;
  double min_eigenvalue = 1.0;
  double max_leakage = 0.0;
  // run responsible for each worst case
  std::string drift_source, eigenvalue_source, leakage_source;
  std::vector<std::string> sources;

  void absorb(const EvolutionResult& run, const std::string& label);
  void absorb(const DensityMatrix& state, const std::string& label);
};

struct AcceptanceOptions {
  std::vector<int> only;  // empty runs all ten criteria
  int workers = 0;        // sweep pool size, 0 for worker_count()
  std::function<void(const CriterionReport&)> on_report;
};

std::string criterion_title(int id);

/// Runs the acceptance criteria in order. Criterion 10 summarises the
/// hygiene of the runs made for the others and measures the RK4 order.
std::vector<CriterionReport> run_acceptance(const AcceptanceOptions& options = {});

}  // namespace rotor
