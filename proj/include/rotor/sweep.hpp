#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rotor/params.hpp"
#include "rotor/propagator.hpp"

namespace rotor {

struct SweepConfig {
  double hbar_tilde = 1.0;
  double gamma_tilde = 1.0;
  std::vector<Harmonic> potential;  // coefficients in units of V0
  std::vector<double> temperatures;  // T~, ascending
  /// The truncation is raised until the steady state keeps less than this on |m| = M.
  double leakage_target = 1e-8;
  int min_truncation = 16;
  int max_truncation = 192;
  SteadyStateConfig steady;
  /// 0 selects worker_count().
  int workers = 0;
};

struct SweepPoint {
  double temperature_tilde = 0.0;
  double d1 = 0.0;  // trace distance between steady and Gibbs state
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  double local_slope = 0.0;  // d ln d1 / d ln T~ from neighbouring points
  int truncation = 0;
  double boundary_population = 0.0;
  double residual = 0.0;
  double seconds = 0.0;
  bool ok = false;
  std::string error;
};

/// ROTOR_WORKERS if set, otherwise the hardware thread count.
int worker_count();

std::vector<double> log_spaced(double lo, double hi, int n);

/// Least-squares slope of ln y against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Steady state and Gibbs distance at one temperature, raising M as needed.
SweepPoint sweep_point(const SweepConfig& cfg, double temperature_tilde);

/// All points on a worker pool. Rows come back in input order; a failed
/// point keeps ok = false with its error message and the sweep carries on.
std::vector<SweepPoint> sweep_temperature(const SweepConfig& cfg,
                                          const std::function<void(const SweepPoint&)>& on_point = {});

/// Fills local_slope from the successful neighbours of each point.
void fill_local_slopes(std::vector<SweepPoint>& points);

/// Slope of ln d1 against ln T~ over successful points with lo <= T~ <= hi.
double window_slope(const std::vector<SweepPoint>& points, double lo, double hi);

}  // namespace rotor
