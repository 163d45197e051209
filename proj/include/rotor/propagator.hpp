#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "rotor/errors.hpp"
#include "rotor/liouvillian.hpp"
#include "rotor/state.hpp"

namespace rotor {

enum class Integrator { rk4_fixed, rk4_adaptive };

std::string_view to_string(Integrator integrator);
Integrator parse_integrator(std::string_view text);

struct EvolutionConfig {
  double dt = 1e-3;  // fixed step, or the initial step for rk4_adaptive
  double t_final = 1.0;
  std::vector<double> snapshot_times;
  Integrator integrator = Integrator::rk4_fixed;
  double tolerance = 1e-9;  // local error per step for rk4_adaptive
  int n_alpha = 0;          // Wigner grid; 0 selects 4M + 2
  /// Spacing of observable samples; 0 selects t_final / 200.
  double record_interval = 0.0;

  double leakage_threshold = 1e-8;
  bool abort_on_leakage = true;
  double positivity_threshold = -1e-6;
  bool check_positivity = true;
  /// Evaluate the full Wigner minimum at every sample (costly).
  bool track_wigner_min = false;

  std::optional<DensityMatrix> reference;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

struct ObservableSeries {
  std::vector<double> t;
  std::vector<double> trace;
  std::vector<double> mean_p;
  std::vector<double> mean_p2;
  std::vector<double> energy;
  std::vector<double> purity;
  std::vector<double> min_wigner;  // NaN when not tracked
  std::vector<double> leakage;     // running maximum of the boundary population
  std::vector<double> min_eigenvalue;
  std::vector<double> distance_to_reference;  // NaN without a reference

  std::size_t size() const { return t.size(); }
};

struct Snapshot {
  double t = 0.0;
  DensityMatrix rho;
};

struct EvolutionResult {
  DensityMatrix final_state;
  ObservableSeries series;
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  double max_leakage = 0.0;
  double min_eigenvalue = 1.0;
  double max_trace_drift = 0.0;
};

/// Integrates d rho/dt = G rho from t = 0 to cfg.t_final. Snapshot and sample
/// times are hit exactly by shortening the step that would overshoot them.
/// Throws NumericalAbort when positivity or leakage thresholds are crossed.
EvolutionResult evolve(const DensityMatrix& initial, const GeneratorSpec& spec, const EvolutionConfig& cfg);

/// Largest step the fixed-step RK4 can take stably for this generator,
/// from the spectral bound of its fastest terms, scaled by `safety`.
double suggested_step(const GeneratorSpec& spec, int truncation, double safety = 0.1);

enum class SteadyStateMethod {
  implicit_euler,  // backward Euler on the assembled sparse generator
  rk4,             // explicit RK4; fine at high T, stiff once hbar^2/T grows
};

struct SteadyStateConfig {
  SteadyStateMethod method = SteadyStateMethod::implicit_euler;
  double tolerance = 1e-9;  // on ||G rho||_tr
  double max_time = 1e5;
  /// Step: implicit_euler defaults to 100/Gamma, rk4 to suggested_step(spec, M, 0.5).
  double dt = 0.0;
  /// Residual check spacing for rk4; 0 selects 1/Gamma.
  double check_interval = 0.0;
};

struct SteadyStateResult {
  DensityMatrix state;
  double time = 0.0;
  double residual = 0.0;      // ||G rho - tr(G rho) rho||_tr
  double raw_residual = 0.0;  // ||G rho||_tr
  double leakage_rate = 0.0;  // -tr(G rho), the flux through the basis edge
  std::vector<std::pair<double, double>> history;  // (t, residual)
};

struct SteadyStateError : ConvergenceError {
  SteadyStateError(const std::string& what, std::vector<std::pair<double, double>> h)
      : ConvergenceError(what), history(std::move(h)) {}
  std::vector<std::pair<double, double>> history;
};

/// ||G rho||_tr, or with `conditioned` ||G rho - tr(G rho) rho||_tr: the
/// residual of the trace-renormalised flow, which stays finite on the
/// quasi-stationary state of a truncated (leaky) generator.
double generator_residual(const Generator& g, const DensityMatrix& rho, bool conditioned = false);

/// Long-time propagation from `seed` until the conditioned generator
/// residual drops below cfg.tolerance. Needs a damped mode (Gamma > 0). The trace is
/// renormalised after every implicit step, which removes the slow decay
/// through the truncation boundary.
SteadyStateResult find_steady_state(const GeneratorSpec& spec, const DensityMatrix& seed,
                                    const SteadyStateConfig& cfg = {});

/// min over the full Wigner grid of each snapshot.
std::vector<double> wigner_min_tracker(const std::vector<Snapshot>& snapshots, int n_alpha = 0);

}  // namespace rotor
