#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rotor/liouvillian.hpp"
#include "rotor/params.hpp"
#include "rotor/propagator.hpp"

namespace rotor {

enum class RunKind { evolve, steady, sweep };
enum class InitialKind { wavepacket, superposition, gibbs, momentum };

/// Everything in scaled units: t~ = t sqrt(V0/I), T~ = T/V0,
/// hbar~ = hbar/sqrt(V0 I), Gamma~ = Gamma sqrt(I/V0), potential in V0.
struct ScenarioConfig {
  std::string name = "scenario";
  RunKind kind = RunKind::evolve;

  struct Units {
    double hbar = 1.0;
    double temperature = 1.0;
    double gamma = 0.0;
    std::optional<double> v0;  // physical energy unit, recorded only
  } units;

  std::vector<Harmonic> potential;

  struct Initial {
    InitialKind kind = InitialKind::wavepacket;
    double sigma = 0.4;
    double alpha0 = 0.0;
    std::vector<double> centers;  // superposition
    int m = 0;                    // momentum eigenstate
  } initial;

  struct Generator {
    GeneratorMode mode = GeneratorMode::full;
    Representation representation = Representation::aux_wigner;
    double diffusion = 0.0;  // D~ for diffusion_only
  } generator;

  struct Evolution {
    int truncation = 48;
    double t_final = 1.0;
    double dt = 0.0;       // 0 picks suggested_step * safety
    double safety = 0.5;
    Integrator integrator = Integrator::rk4_fixed;
    double tolerance = 1e-9;
    double record_interval = 0.0;  // 0 selects t_final / 200
    double leakage_threshold = 1e-8;
    double positivity_threshold = -1e-6;
  } evolution;

  struct Outputs {
    std::string directory = "out";
    std::vector<double> snapshot_times;     // t~
    std::vector<double> revival_fractions;  // fractions of t_r = 4 pi I / hbar
    std::vector<std::string> observables = {"trace", "mean_p", "mean_p2", "energy", "purity",
                                            "leakage", "min_eigenvalue"};
    int n_alpha = 0;  // 0 selects 4M + 2
  } outputs;

  struct Steady {
    double tolerance = 1e-9;
    double max_time = 1e5;
  } steady;

  struct Sweep {
    double t_min = 0.1;
    double t_max = 25.6;
    int points = 17;
    double leakage_target = 1e-8;
    int max_truncation = 192;
    double mid_lo = 0.8, mid_hi = 1.6;
    double high_lo = 6.4, high_hi = 25.6;
  } sweep;

  /// Throws ConfigError on the first invalid field.
  void validate() const;

  Scaling scaling() const { return Scaling(units.hbar); }
  GeneratorSpec generator_spec() const;
  /// Snapshot times in t~, sorted and merged from both lists.
  std::vector<double> resolved_snapshots() const;
};

std::vector<std::string> known_observables();

/// Parse and validate YAML text; throws ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string to_yaml(const ScenarioConfig& cfg);

std::string_view to_string(RunKind kind);
std::string_view to_string(InitialKind kind);

/// Exit codes shared by the runners and the CLI.
enum ExitCode : int { exit_ok = 0, exit_failed_checks = 1, exit_config_error = 2, exit_numerical_abort = 3 };

struct RunOutcome {
  int exit_code = exit_ok;
  std::string message;
  std::filesystem::path directory;
};

/// Each runner writes its artifacts under `out` (or the configured directory).
RunOutcome run_evolve(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out = {});
RunOutcome run_steady(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out = {});
RunOutcome run_sweep_temperature(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out = {},
                                 int workers = 0);
/// Dispatches on cfg.kind.
RunOutcome run_scenario(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out = {});

/// Writes matplotlib scripts next to the CSVs of a finished run. Returns the
/// script paths; throws std::runtime_error when the run artifacts are missing.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& run_directory);

std::vector<std::string> preset_names();
/// Pinned YAML text of a preset; throws ConfigError for unknown names.
const std::string& preset_text(const std::string& name);

/// The initial state a config describes, on its evolution truncation.
DensityMatrix initial_state(const ScenarioConfig& cfg);

}  // namespace rotor
