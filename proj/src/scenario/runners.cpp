#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "csv.hpp"
#include "rotor/errors.hpp"
#include "rotor/metrics.hpp"
#include "rotor/operators.hpp"
#include "rotor/scenario.hpp"
#include "rotor/sweep.hpp"

namespace rotor {

namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

bool wants(const ScenarioConfig& cfg, const std::string& name) {
  const auto& o = cfg.outputs.observables;
  return std::find(o.begin(), o.end(), name) != o.end();
}

fs::path prepare(const ScenarioConfig& cfg, const std::optional<fs::path>& out) {
  const fs::path dir = out ? *out : fs::path(cfg.outputs.directory);
  fs::create_directories(dir);
  std::ofstream(dir / "config.resolved.yaml") << to_yaml(cfg);
  return dir;
}

void manifest_header(Manifest& m, const ScenarioConfig& cfg, const GeneratorSpec& spec) {
  const auto s = cfg.scaling();
  m.add("name", cfg.name);
  m.add("kind", std::string(to_string(cfg.kind)));
  m.add("hbar_tilde", cfg.units.hbar);
  m.add("temperature_tilde", cfg.units.temperature);
  m.add("gamma_tilde", cfg.units.gamma);
  if (cfg.units.v0) m.add("v0", *cfg.units.v0);
  m.add("units", "internal hbar = I = k_B = 1, V0 = 1/hbar~^2");
  m.add("internal_v0", s.v0());
  m.add("internal_temperature", spec.bath.temperature());
  m.add("internal_gamma", spec.bath.gamma());
  m.add("internal_diffusion", spec.momentum_diffusion());
  m.add("epsilon1", spec.bath.epsilon1());
  m.add("epsilon2", spec.bath.epsilon2(spec.potential));
  std::ostringstream pot;
  for (const auto& h : cfg.potential) pot << "k=" << h.k << ":cos=" << fmt(h.a) << ":sin=" << fmt(h.b) << " ";
  m.add("potential_v0_units", pot.str().empty() ? "none" : pot.str());
  m.add("mode", std::string(to_string(spec.mode)));
  m.add("representation", std::string(to_string(spec.representation)));
}

void write_wigner_rows(CsvWriter& w, double t_tilde, const FullWigner& fw) {
  for (int i = 0; i < fw.n_alpha; ++i)
    for (int m = -fw.truncation; m <= fw.truncation; ++m) w.row({fmt(t_tilde), fmt(fw.alpha(i)), std::to_string(m), fmt(fw.at(i, m))});
}

void write_marginal_rows(CsvWriter& angle, CsvWriter& momentum, double t_tilde, const DensityMatrix& rho,
                         int n_alpha, double hbar_tilde) {
  const auto mg = marginals(to_aux(rho), n_alpha);
  for (std::size_t i = 0; i < mg.alpha.size(); ++i) angle.row({fmt(t_tilde), fmt(mg.alpha[i]), fmt(mg.angle_density[i])});
  const int M = rho.truncation();
  for (int m = -M; m <= M; ++m)
    momentum.row({fmt(t_tilde), std::to_string(m), fmt(hbar_tilde * m), fmt(mg.momentum[m + M])});
}

}  // namespace

DensityMatrix initial_state(const ScenarioConfig& cfg) {
  const int M = cfg.evolution.truncation;
  const auto& in = cfg.initial;
  switch (in.kind) {
    case InitialKind::wavepacket: return build_wavepacket(in.sigma, in.alpha0, M);
    case InitialKind::superposition: {
      std::vector<Vector> parts;
      for (double c : in.centers) parts.push_back(wavepacket_amplitudes(in.sigma, c, M));
      return superpose(parts, std::vector<cplx>(parts.size(), 1.0), M);
    }
    case InitialKind::gibbs: {
      const auto spec = cfg.generator_spec();
      return gibbs_state(spec.potential, spec.bath, M);
    }
    case InitialKind::momentum: return DensityMatrix::momentum_eigenstate(M, in.m);
  }
  throw ConfigError("unknown initial state");
}

RunOutcome run_evolve(const ScenarioConfig& cfg, const std::optional<fs::path>& out) {
  const auto start = clock_type::now();
  RunOutcome outcome;
  GeneratorSpec spec;
  DensityMatrix rho0;
  EvolutionConfig ec;
  const auto s = cfg.scaling();
  const int M = cfg.evolution.truncation;
  try {
    cfg.validate();
    spec = cfg.generator_spec();
    rho0 = initial_state(cfg);
    ec.t_final = s.time(cfg.evolution.t_final);
    ec.dt = cfg.evolution.dt > 0 ? s.time(cfg.evolution.dt) : suggested_step(spec, M, cfg.evolution.safety);
    for (double t : cfg.resolved_snapshots()) ec.snapshot_times.push_back(std::min(s.time(t), ec.t_final));
    ec.integrator = cfg.evolution.integrator;
    ec.tolerance = cfg.evolution.tolerance;
    ec.n_alpha = cfg.outputs.n_alpha;
    ec.record_interval = s.time(cfg.evolution.record_interval);
    ec.leakage_threshold = cfg.evolution.leakage_threshold;
    ec.positivity_threshold = cfg.evolution.positivity_threshold;
    ec.track_wigner_min = wants(cfg, "min_wigner");
    if (wants(cfg, "d1_gibbs")) ec.reference = gibbs_state(spec.potential, spec.bath, M, 1.0);
    ec.validate();
  } catch (const Error& e) {
    return {exit_config_error, e.what(), {}};
  }

  outcome.directory = prepare(cfg, out);
  const int n_alpha = cfg.outputs.n_alpha > 0 ? cfg.outputs.n_alpha : 4 * M + 2;
  Manifest manifest;
  manifest_header(manifest, cfg, spec);
  manifest.add("truncation", M);
  manifest.add("n_alpha", n_alpha);
  manifest.add("dt", ec.dt);
  manifest.add("dt_tilde", s.time_tilde(ec.dt));
  manifest.add("integrator", std::string(to_string(ec.integrator)));
  manifest.add("t_final_tilde", cfg.evolution.t_final);
  manifest.add("initial_state", std::string(to_string(cfg.initial.kind)));
  manifest.add("initial_boundary_population", rho0.boundary_population());

  EvolutionResult res;
  try {
    res = evolve(rho0, spec, ec);
  } catch (const NumericalAbort& e) {
    manifest.add("status", "aborted");
    manifest.add("error", e.what());
    manifest.add("wall_time_s", seconds_since(start));
    manifest.write(outcome.directory / "manifest.txt");
    return {exit_numerical_abort, e.what(), outcome.directory};
  }

  {
    std::vector<std::string> header = {"t_tilde"};
    for (const auto& name : known_observables())
      if (wants(cfg, name)) header.push_back(name);
    CsvWriter w(outcome.directory / "observables.csv", header);
    const auto& ser = res.series;
    const double h = cfg.units.hbar;
    for (std::size_t i = 0; i < ser.size(); ++i) {
      std::vector<std::string> row = {fmt(s.time_tilde(ser.t[i]))};
      for (const auto& name : known_observables()) {
        if (!wants(cfg, name)) continue;
        double v = 0;
        if (name == "trace") v = ser.trace[i];
        else if (name == "mean_p") v = ser.mean_p[i] * h;
        else if (name == "mean_p2") v = ser.mean_p2[i] * h * h;
        else if (name == "energy") v = ser.energy[i] * h * h;
        else if (name == "purity") v = ser.purity[i];
        else if (name == "leakage") v = ser.leakage[i];
        else if (name == "min_eigenvalue") v = ser.min_eigenvalue[i];
        else if (name == "min_wigner") v = ser.min_wigner[i];
        else if (name == "d1_gibbs") v = ser.distance_to_reference[i];
        row.push_back(fmt(v));
      }
      w.row(row);
    }
  }

  double wigner_min = std::numeric_limits<double>::infinity();
  {
    CsvWriter wig(outcome.directory / "wigner_snapshots.csv", {"t_tilde", "alpha", "m", "W"});
    CsvWriter ang(outcome.directory / "marginals_angle.csv", {"t_tilde", "alpha", "density"});
    CsvWriter mom(outcome.directory / "marginals_momentum.csv", {"t_tilde", "m", "p_tilde", "probability"});
    for (const auto& snap : res.snapshots) {
      const double tt = s.time_tilde(snap.t);
      const auto fw = full_wigner(snap.rho, n_alpha);
      wigner_min = std::min(wigner_min, fw.min());
      write_wigner_rows(wig, tt, fw);
      write_marginal_rows(ang, mom, tt, snap.rho, n_alpha, cfg.units.hbar);
    }
    if (res.snapshots.empty()) write_marginal_rows(ang, mom, cfg.evolution.t_final, res.final_state, n_alpha, cfg.units.hbar);
  }

  manifest.add("snapshots", static_cast<int>(res.snapshots.size()));
  manifest.add("steps", static_cast<long>(res.steps));
  manifest.add("rejected_steps", static_cast<long>(res.rejected_steps));
  manifest.add("leakage_max", res.max_leakage);
  manifest.add("positivity_min", res.min_eigenvalue);
  manifest.add("trace_drift_max", res.max_trace_drift);
  if (!res.snapshots.empty()) manifest.add("wigner_min_snapshots", wigner_min);
  manifest.add("status", "ok");
  manifest.add("wall_time_s", seconds_since(start));
  manifest.write(outcome.directory / "manifest.txt");
  outcome.message = "wrote " + outcome.directory.string();
  return outcome;
}

RunOutcome run_steady(const ScenarioConfig& cfg, const std::optional<fs::path>& out) {
  const auto start = clock_type::now();
  GeneratorSpec spec;
  DensityMatrix seed;
  const auto s = cfg.scaling();
  const int M = cfg.evolution.truncation;
  try {
    cfg.validate();
    spec = cfg.generator_spec();
    seed = gibbs_state(spec.potential, spec.bath, M, 1.0);
  } catch (const Error& e) {
    return {exit_config_error, e.what(), {}};
  }
  RunOutcome outcome;
  outcome.directory = prepare(cfg, out);
  const int n_alpha = cfg.outputs.n_alpha > 0 ? cfg.outputs.n_alpha : 4 * M + 2;
  Manifest manifest;
  manifest_header(manifest, cfg, spec);
  manifest.add("truncation", M);
  manifest.add("n_alpha", n_alpha);

  SteadyStateConfig sc;
  sc.tolerance = cfg.steady.tolerance;
  sc.max_time = s.time(cfg.steady.max_time);
  SteadyStateResult ss;
  try {
    ss = find_steady_state(spec, seed, sc);
  } catch (const ConvergenceError& e) {
    manifest.add("status", "aborted");
    manifest.add("error", e.what());
    manifest.add("wall_time_s", seconds_since(start));
    manifest.write(outcome.directory / "manifest.txt");
    return {exit_numerical_abort, e.what(), outcome.directory};
  }

  {
    CsvWriter w(outcome.directory / "steady_populations.csv", {"m", "p_tilde", "rho_eq", "rho_gibbs"});
    for (int m = -M; m <= M; ++m)
      w.row({std::to_string(m), fmt(cfg.units.hbar * m), fmt(ss.state(m, m).real()), fmt(seed(m, m).real())});
  }
  {
    CsvWriter wig(outcome.directory / "wigner_steady.csv", {"alpha", "m", "W_eq", "W_gibbs"});
    const auto we = full_wigner(ss.state, n_alpha);
    const auto wg = full_wigner(seed, n_alpha);
    for (int i = 0; i < n_alpha; ++i)
      for (int m = -M; m <= M; ++m) wig.row({fmt(we.alpha(i)), std::to_string(m), fmt(we.at(i, m)), fmt(wg.at(i, m))});
    manifest.add("wigner_min", we.min());
  }
  const double boundary = ss.state.boundary_population();
  manifest.add("d1_eq_gibbs", trace_distance(ss.state, seed));
  manifest.add("residual", ss.residual);
  manifest.add("raw_residual", ss.raw_residual);
  manifest.add("leakage_rate", ss.leakage_rate);
  manifest.add("leakage_max", boundary);
  manifest.add("positivity_min", ss.state.min_eigenvalue());
  manifest.add("relaxation_time_tilde", s.time_tilde(ss.time));
  if (boundary > cfg.evolution.leakage_threshold) {
    std::ostringstream msg;
    msg << "steady-state boundary population " << boundary << " above " << cfg.evolution.leakage_threshold
        << "; raise evolution.truncation";
    manifest.add("status", "aborted");
    manifest.add("error", msg.str());
    manifest.add("wall_time_s", seconds_since(start));
    manifest.write(outcome.directory / "manifest.txt");
    return {exit_numerical_abort, msg.str(), outcome.directory};
  }
  manifest.add("status", "ok");
  manifest.add("wall_time_s", seconds_since(start));
  manifest.write(outcome.directory / "manifest.txt");
  outcome.message = "wrote " + outcome.directory.string();
  return outcome;
}

RunOutcome run_sweep_temperature(const ScenarioConfig& cfg, const std::optional<fs::path>& out, int workers) {
  const auto start = clock_type::now();
  SweepConfig sc;
  try {
    cfg.validate();
    sc.hbar_tilde = cfg.units.hbar;
    sc.gamma_tilde = cfg.units.gamma;
    sc.potential = cfg.potential;
    sc.temperatures = log_spaced(cfg.sweep.t_min, cfg.sweep.t_max, cfg.sweep.points);
    sc.leakage_target = cfg.sweep.leakage_target;
    sc.max_truncation = cfg.sweep.max_truncation;
    sc.steady.tolerance = cfg.steady.tolerance;
    sc.workers = workers;
  } catch (const Error& e) {
    return {exit_config_error, e.what(), {}};
  }
  RunOutcome outcome;
  outcome.directory = prepare(cfg, out);
  const auto points = sweep_temperature(sc);

  int failed = 0;
  {
    CsvWriter w(outcome.directory / "sweep.csv",
                {"T_tilde", "d1", "epsilon1", "epsilon2", "local_slope", "truncation", "boundary_population",
                 "residual", "status"});
    for (const auto& p : points) {
      failed += !p.ok;
      w.row({fmt(p.temperature_tilde), fmt(p.d1), fmt(p.epsilon1), fmt(p.epsilon2), fmt(p.local_slope),
             std::to_string(p.truncation), fmt(p.boundary_population), fmt(p.residual),
             p.ok ? std::string("ok") : CsvWriter::quote("failed: " + p.error)});
    }
  }
  Manifest manifest;
  manifest_header(manifest, cfg, cfg.generator_spec());
  manifest.add("points", static_cast<int>(points.size()));
  manifest.add("failed_points", failed);
  manifest.add("workers", sc.workers > 0 ? sc.workers : worker_count());
  manifest.add("leakage_target", sc.leakage_target);
  double leak = 0.0;
  int max_m = 0;
  for (const auto& p : points)
    if (p.ok) {
      leak = std::max(leak, p.boundary_population);
      max_m = std::max(max_m, p.truncation);
    }
  manifest.add("leakage_max", leak);
  manifest.add("truncation_max", max_m);
  auto slope = [&](const char* key, double lo, double hi) {
    try {
      manifest.add(key, window_slope(points, lo, hi));
    } catch (const std::exception&) {
      manifest.add(key, "n/a");
    }
  };
  manifest.add("mid_window", fmt(cfg.sweep.mid_lo) + " " + fmt(cfg.sweep.mid_hi));
  slope("mid_window_slope", cfg.sweep.mid_lo, cfg.sweep.mid_hi);
  manifest.add("high_window", fmt(cfg.sweep.high_lo) + " " + fmt(cfg.sweep.high_hi));
  slope("high_window_slope", cfg.sweep.high_lo, cfg.sweep.high_hi);
  manifest.add("status", failed == 0 ? "ok" : (failed == static_cast<int>(points.size()) ? "aborted" : "partial"));
  manifest.add("wall_time_s", seconds_since(start));
  manifest.write(outcome.directory / "manifest.txt");
  if (failed == static_cast<int>(points.size())) return {exit_numerical_abort, "every sweep point failed", outcome.directory};
  outcome.message = "wrote " + outcome.directory.string() + (failed ? " (" + std::to_string(failed) + " failed points)" : "");
  return outcome;
}

RunOutcome run_scenario(const ScenarioConfig& cfg, const std::optional<fs::path>& out) {
  switch (cfg.kind) {
    case RunKind::evolve: return run_evolve(cfg, out);
    case RunKind::steady: return run_steady(cfg, out);
    case RunKind::sweep: return run_sweep_temperature(cfg, out);
  }
  return {exit_config_error, "unknown run kind", {}};
}

}  // namespace rotor
