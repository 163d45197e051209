#include "rotor/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "rotor/classical_fp.hpp"
#include "rotor/metrics.hpp"
#include "rotor/operators.hpp"
#include "rotor/oracles.hpp"
#include "rotor/sweep.hpp"

namespace rotor {

namespace {

using std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

Check make(std::string name, double value, std::string relation, double bound, bool passed, double target = 0.0) {
  return {std::move(name), value, std::move(relation), bound, target, passed};
}

DensityMatrix random_state(int truncation, unsigned seed, int margin) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  const int inner = truncation - margin;
  const int n = 2 * inner + 1;
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cplx(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace();
  return DensityMatrix(inner, rho).padded(truncation);
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

// First time the relative excess (x - x_inf)/(x_0 - x_inf) drops to 1/2,
// linearly interpolated between samples.
double half_life(const std::vector<double>& t, const std::vector<double>& x, double x_inf) {
  const double x0 = x.front() - x_inf;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double a = (x[i - 1] - x_inf) / x0, b = (x[i] - x_inf) / x0;
    if (b <= 0.5) return t[i - 1] + (t[i] - t[i - 1]) * (a - 0.5) / (a - b);
  }
  return inf;
}

// First sample time with distance below eps.
double time_to(const ObservableSeries& s, double eps) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.distance_to_reference[i] < eps) return s.t[i];
  return inf;
}

DensityMatrix packet_pair(double sigma, int truncation) {
  return superpose({wavepacket_amplitudes(sigma, pi / 2, truncation), wavepacket_amplitudes(sigma, -pi / 2, truncation)},
                   {1.0, 1.0}, truncation);
}

void track(double value, double& worst, std::string& source, const std::string& label, bool larger) {
  if (larger ? value > worst : value < worst) {
    worst = value;
    source = label;
  }
}

const std::vector<Harmonic> kDoubleWell = {{1, 1.0, 0.0}, {2, -1.0, 0.0}};

struct Suite {
  Hygiene hygiene;
  int workers = 0;

  void representation_equivalence(CriterionReport& r) {
    GeneratorSpec spec;
    spec.bath = BathParams(3.0, 0.7, 0.8, 1.3);
    spec.potential = PotentialSpec({{1, 1.5, 0.4}, {2, -1.5, 0.0}, {3, 0.2, -0.6}});
    spec.frictionless_diffusion = 2.2;
    const int M = 10;
    double worst = 0.0;
    for (auto mode : {GeneratorMode::full, GeneratorMode::unitary_only, GeneratorMode::diffusion_only,
                      GeneratorMode::no_angular_diffusion}) {
      spec.mode = mode;
      spec.representation = Representation::matrix;
      const Generator gm(spec, M);
      spec.representation = Representation::aux_wigner;
      const Generator ga(spec, M);
      for (unsigned seed = 0; seed < 10; ++seed) {
        const auto rho = random_state(M, seed, 1);
        const auto dm = to_aux(gm(rho)).data();
        const auto da = ga(to_aux(rho)).data();
        std::vector<cplx> diff(dm.size());
        for (std::size_t i = 0; i < dm.size(); ++i) diff[i] = dm[i] - da[i];
        worst = std::max(worst, max_abs(diff) / max_abs(dm));
      }
    }
    r.checks.push_back(check_less("generator relative deviation, 10 random states x 4 modes", worst, 1e-12));

    spec.mode = GeneratorMode::full;
    spec.bath = BathParams(2.0, 0.6);
    spec.potential = PotentialSpec::double_well(1.5);
    const int Mt = 16;
    const auto rho0 = build_wavepacket(0.4, 0.7, Mt);
    EvolutionConfig cfg;
    cfg.t_final = 1.0;
    cfg.dt = suggested_step(spec, Mt, 0.5);
    spec.representation = Representation::matrix;
    const auto a = evolve(rho0, spec, cfg);
    spec.representation = Representation::aux_wigner;
    const auto b = evolve(rho0, spec, cfg);
    hygiene.absorb(a, "trajectory (matrix)");
    hygiene.absorb(b, "trajectory (aux)");
    r.checks.push_back(check_less("trajectory trace distance at t = 1", trace_distance(a.final_state, b.final_state), 1e-9));
  }

  void revival(CriterionReport& r) {
    const int M = 36;
    const auto rho0 = build_wavepacket(0.1, 0.0, M);
    GeneratorSpec spec;
    spec.mode = GeneratorMode::unitary_only;
    const double tr = revival_time();
    EvolutionConfig cfg;
    cfg.t_final = tr;
    cfg.dt = tr / 200000;
    cfg.snapshot_times = {tr / 32};
    const auto run = evolve(rho0, spec, cfg);
    hygiene.absorb(run, "revival");
    r.checks.push_back(check_greater("fidelity at t_r", fidelity(run.final_state, rho0), 1 - 1e-6));
    r.checks.push_back(check_less("min W at t_r/32", full_wigner(run.snapshots.at(0).rho, 4 * M + 2).min(), 0.0));
  }

  void moment_laws(CriterionReport& r) {
    const Scaling s(1.0);
    GeneratorSpec spec;
    spec.bath = s.bath(100.0, 1.0);
    const int M = 72;
    const Vector psi = wavepacket_amplitudes(0.5, 0.0, M);
    Vector boosted = Vector::Zero(psi.size());
    for (int i = 0; i + 5 < psi.size(); ++i) boosted(i + 5) = psi(i);
    const auto start = DensityMatrix::from_pure(M, boosted);
    EvolutionConfig cfg;
    cfg.t_final = 3.0 / spec.bath.gamma();
    cfg.dt = suggested_step(spec, M, 1.0);
    const auto run = evolve(start, spec, cfg);
    hygiene.absorb(run, "moment laws");
    std::vector<double> t, lp;
    for (std::size_t i = 0; i < run.series.size(); ++i) {
      t.push_back(run.series.t[i]);
      lp.push_back(std::log(run.series.mean_p[i]));
    }
    // least-squares slope of ln <p> against t
    const double n = static_cast<double>(t.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      st += t[i];
      sl += lp[i];
      stt += t[i] * t[i];
      stl += t[i] * lp[i];
    }
    const double rate = -(n * stl - st * sl) / (n * stt - st * st);
    r.checks.push_back(check_within("fitted <p> decay rate / Gamma", rate / spec.bath.gamma(), 1.0, 1e-3));

    const auto ss = find_steady_state(spec, gibbs_state({}, spec.bath, M, 1.0));
    hygiene.absorb(ss.state, "moment laws steady state");
    const double target = spec.bath.diffusion() / spec.bath.gamma();
    r.checks.push_back(
        check_within("<p^2>(inf) / (D/Gamma)", ss.state.mean_momentum_squared() / target, 1.0, 1e-3));
  }

  void diffusion_oracle(CriterionReport& r) {
    const int M = 32;
    const double D = 1.0;
    const auto spec = GeneratorSpec::frictionless(D);
    const auto rho0 = build_wavepacket(0.3, 0.0, M);
    EvolutionConfig cfg;
    cfg.t_final = 2.0;
    cfg.dt = suggested_step(spec, M, 0.25);
    cfg.snapshot_times = {0.5, 2.0};
    const auto run = evolve(rho0, spec, cfg);
    hygiene.absorb(run, "frictionless diffusion");
    for (const auto& snap : run.snapshots) {
      const auto exact = from_aux(apply_diffusion_solution(to_aux(rho0), snap.t, D));
      std::ostringstream name;
      name << "trace distance to kernel solution at Dt/hbar^2 = " << snap.t;
      r.checks.push_back(check_less(name.str(), trace_distance(exact, snap.rho), 1e-6));
      const auto k = diffusion_kernel(snap.t, D, 2 * M, 256);
      std::ostringstream kn;
      kn << "kernel normalisation |sum_l int K_l - 1| at Dt/hbar^2 = " << snap.t;
      r.checks.push_back(check_less(kn.str(), std::abs(k.normalization() - 1.0), 1e-9));
      r.checks.push_back(check_less(kn.str() + " (quadrature)", std::abs(k.normalization_quadrature() - 1.0), 1e-9));
    }
  }

  void free_equilibrium_profile(CriterionReport& r) {
    const Scaling s(1.0);
    GeneratorSpec spec;
    spec.bath = s.bath(5.0, 1.0);
    const int M = 40;
    const auto ss = find_steady_state(spec, DensityMatrix::maximally_mixed(M));
    hygiene.absorb(ss.state, "free steady state");
    const auto profile = free_equilibrium(spec.bath.temperature(), 1.0, 1.0, M);
    r.checks.push_back(check_at_most("trace distance to renormalised binomial", trace_distance(ss.state, profile.state), 1e-2));
    r.checks.push_back(check_less("trace distance to squared-binomial profile",
                                  trace_distance(ss.state, free_equilibrium_exact(spec.bath.temperature(), 1.0, 1.0, M)),
                                  1e-8));
  }

  void gibbs_residual_scaling(CriterionReport& r) {
    const Scaling s(1.0);
    const auto v = s.potential(kDoubleWell);
    std::vector<double> temps = {2.0, 4.0, 8.0, 16.0};
    std::vector<double> free_res, full_res, pot_res;
    for (double tt : temps) {
      const auto bath = s.bath(tt, 1.0);
      const int M = gibbs_truncation(v, bath, 1e-14, 16, 256) + 4;
      free_res.push_back(gibbs_residual({}, bath, M).residual / bath.gamma());
      const auto g = gibbs_residual(v, bath, M);
      full_res.push_back(g.residual / bath.gamma());
      pot_res.push_back(g.potential_part / bath.gamma());
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < temps.size(); ++i) decreasing &= full_res[i] < full_res[i - 1] && free_res[i] < free_res[i - 1];
    r.checks.push_back(check_true("||L rho_G||/Gamma decreasing in T", decreasing));
    r.checks.push_back(check_within("log-log slope, V = 0", loglog_slope(temps, free_res), -1.0, 0.15));
    r.checks.push_back(check_within("log-log slope, potential-induced part", loglog_slope(temps, pot_res), -2.0, 0.3));
  }

  void fig4_sweep(CriterionReport& r) {
    SweepConfig cfg;
    cfg.potential = kDoubleWell;
    cfg.workers = workers;
    cfg.temperatures = log_spaced(0.1, 25.6, 17);
    const auto points = sweep_temperature(cfg);
    bool all_ok = true;
    for (const auto& p : points) {
      all_ok &= p.ok;
      std::ostringstream label;
      label << "sweep T~ = " << p.temperature_tilde;
      track(p.boundary_population, hygiene.max_leakage, hygiene.leakage_source, label.str(), true);
    }
    hygiene.sources.push_back("temperature sweep");
    r.checks.push_back(check_true("all sweep points converged", all_ok));
    r.checks.push_back(check_greater("d1 at the lowest T~ = 0.1", points.front().d1, 0.5));
    r.checks.push_back(check_within("fitted slope, 0.8 <= T~ <= 1.6", window_slope(points, 0.8, 1.6), -2.0, 0.3));
    r.checks.push_back(check_within("fitted slope, 6.4 <= T~ <= 25.6", window_slope(points, 6.4, 25.6), -1.0, 0.3));
  }

  void thermalization(CriterionReport& r) {
    const Scaling s(0.5);
    const auto v = s.potential(kDoubleWell);
    GeneratorSpec hot;
    hot.bath = s.bath(6.0, 1.0);
    hot.potential = v;
    // at M = 32 the boundary flux alone drains 1e-8 of the trace by t~ = 25
    const int M = 36;
    const auto gibbs = gibbs_state(v, hot.bath, M);
    const auto eq = find_steady_state(hot, gibbs);
    hygiene.absorb(eq.state, "T~ = 6 steady state");

    {  // (a) packet at the local minimum
      EvolutionConfig cfg;
      cfg.t_final = s.time(25.0);
      cfg.dt = suggested_step(hot, M, 1.0);
      for (int k = 1; k <= 5; ++k) cfg.snapshot_times.push_back(s.time(5.0 * k));
      const auto run = evolve(build_wavepacket(0.4, 0.0, M), hot, cfg);
      hygiene.absorb(run, "thermalization (a)");
      std::vector<double> dg, de;
      for (const auto& snap : run.snapshots) {
        dg.push_back(trace_distance(snap.rho, gibbs));
        de.push_back(trace_distance(snap.rho, eq.state));
      }
      // d1 to rho_G saturates at d1(rho_eq, rho_G), so allow round-off there
      bool gibbs_mono = true, eq_mono = true;
      for (std::size_t k = 1; k < dg.size(); ++k) {
        gibbs_mono &= dg[k] <= dg[k - 1] + 1e-9;
        eq_mono &= de[k] < de[k - 1];
      }
      r.checks.push_back(check_true("(a) d1(rho(5k), rho_G) non-increasing, k = 1..5", gibbs_mono));
      r.checks.push_back(check_true("(a) d1(rho(5k), rho_eq) strictly decreasing", eq_mono));
      r.checks.push_back(check_less("(a) d1(rho(25), rho_G)", dg.back(), 0.05));
    }
    {  // (b) superposition: decoherence against energy relaxation
      EvolutionConfig cfg;
      cfg.t_final = s.time(3.0);
      cfg.dt = suggested_step(hot, M, 1.0);
      for (int k = 0; k <= 300; ++k) cfg.snapshot_times.push_back(s.time(0.01 * k));
      const auto run = evolve(packet_pair(0.3, M), hot, cfg);
      hygiene.absorb(run, "thermalization (b)");
      const auto H = hamiltonian(v, hot.bath, M);
      std::vector<double> t, e, c;
      for (const auto& snap : run.snapshots) {
        t.push_back(s.time_tilde(snap.t));
        e.push_back(energy(snap.rho, H));
        c.push_back(long_range_coherence(snap.rho, pi / 2, 256));
      }
      const double tc = half_life(t, c, long_range_coherence(eq.state, pi / 2, 256));
      const double te = half_life(t, e, energy(eq.state, H));
      r.checks.push_back(check_less("(b) coherence half-life / energy half-life", tc / te, 1.0));
    }
    {  // (c) tunnelling slow-down at low temperature
      GeneratorSpec cold;
      cold.bath = s.bath(0.2, 1.0);
      cold.potential = v;
      const int Mc = 24;
      const auto eqc = find_steady_state(cold, gibbs_state(v, cold.bath, Mc));
      hygiene.absorb(eqc.state, "T~ = 0.2 steady state");
      const auto marg = marginals(to_aux(eqc.state), 256);
      double outer = 0.0, total = 0.0;
      for (std::size_t i = 0; i < marg.alpha.size(); ++i) {
        total += marg.angle_density[i];
        if (std::abs(marg.alpha[i]) > pi / 2) outer += marg.angle_density[i];
      }
      r.checks.push_back(check_greater("(c) steady-state weight at |alpha| > pi/2", outer / total, 0.5));

      const double eps = 0.25, horizon = 12.0;
      EvolutionConfig cfg;
      cfg.t_final = s.time(horizon);
      cfg.dt = suggested_step(cold, Mc, 1.0);
      cfg.record_interval = s.time(0.05);
      cfg.reference = eqc.state;
      const auto local = evolve(build_wavepacket(0.4, 0.0, Mc), cold, cfg);
      const auto pair = evolve(packet_pair(0.3, Mc), cold, cfg);
      hygiene.absorb(local, "thermalization (c) local minimum");
      hygiene.absorb(pair, "thermalization (c) superposition");
      const double t_pair = s.time_tilde(time_to(pair.series, eps));
      const double t_local = s.time_tilde(time_to(local.series, eps));
      r.checks.push_back(check_less("(c) superposition time to d1 < 0.25 (t~)", t_pair, horizon));
      // a local start that never gets there within the horizon counts as slower
      r.checks.push_back(check_greater("(c) local-minimum time to d1 < 0.25 (t~)", std::min(t_local, horizon), t_pair));
    }
  }

  void classical_limit(CriterionReport& r) {
    {
      const Scaling s(1.0);
      const auto v = s.potential(kDoubleWell);
      const auto bath = s.bath(1.0, 1.0);
      const auto grid = ClassicalGrid::thermal(64, 16384, bath.temperature(), 1.0);
      const double res = stationarity_residual(classical_gibbs(grid, v, bath.temperature(), 1.0), FpParams::thermal(v, bath));
      r.checks.push_back(check_less("classical Gibbs stationarity residual per unit time", res, 1e-6));
    }
    std::vector<double> l1, hw;
    for (double ht : {1.0, 0.5, 0.25}) {
      const Scaling s(ht);
      const auto v = s.potential(kDoubleWell);
      const auto bath = s.bath(1.0, 1.0);
      const int M = std::max(gibbs_truncation(v, bath, 1e-12, 8, 400), 20) + 8;
      GeneratorSpec spec;
      spec.bath = bath;
      spec.potential = v;
      EvolutionConfig cfg;
      cfg.t_final = s.time(2.0);
      cfg.dt = suggested_step(spec, M, 0.5);
      const auto run = evolve(build_wavepacket(0.4, 0.0, M), spec, cfg);
      std::ostringstream label;
      label << "quantum run hbar~ = " << ht;
      hygiene.absorb(run, label.str());
      const auto grid = ClassicalGrid::thermal(256, 128, bath.temperature(), 1.0);
      const auto params = FpParams::thermal(v, bath);
      const auto c = fp_evolve(classical_wavepacket(grid, 0.4, 0.0, 1.0), params, cfg.t_final, fp_max_step(grid, params));
      const auto cmp = quantum_classical_compare(run.final_state, 1.0, c);
      l1.push_back(cmp.l1_distance);
      hw.push_back(cmp.half_integer_weight);
    }
    r.checks.push_back(check_less("L1 at t~ = 2: hbar~ 0.5 vs 1", l1[1], l1[0]));
    r.checks.push_back(check_less("L1 at t~ = 2: hbar~ 0.25 vs 0.5", l1[2], l1[1]));
    r.checks.push_back(check_less("half-integer weight: hbar~ 0.5 vs 1", hw[1], hw[0]));
    r.checks.push_back(check_less("half-integer weight: hbar~ 0.25 vs 0.5", hw[2], hw[1]));
  }

  void numerical_hygiene(CriterionReport& r) {
    GeneratorSpec spec;
    spec.bath = BathParams(2.0, 0.6);
    spec.potential = PotentialSpec::double_well(1.5);
    const int M = 14;
    const auto rho0 = build_wavepacket(0.5, 1.0, M);
    const double t = 0.5, h = suggested_step(spec, M, 1.0);
    auto run = [&](double dt) {
      EvolutionConfig cfg;
      cfg.t_final = t;
      cfg.dt = dt;
      cfg.record_interval = t;
      return evolve(rho0, spec, cfg).final_state;
    };
    const auto ref = run(h / 64);
    const double order = std::log2(trace_distance(run(h / 2), ref) / trace_distance(run(h / 4), ref));
    r.checks.push_back(check_less("max trace drift (" + hygiene.drift_source + ")", hygiene.max_trace_drift, 1e-9));
    r.checks.push_back(check_greater("min eigenvalue (" + hygiene.eigenvalue_source + ")", hygiene.min_eigenvalue, -1e-8));
    r.checks.push_back(check_less("max boundary leakage (" + hygiene.leakage_source + ")", hygiene.max_leakage, 1e-8));
    r.checks.push_back(check_greater("measured RK4 order", order, 3.7));
  }
};

}  // namespace

Check check_less(std::string name, double value, double bound) {
  return make(std::move(name), value, "<", bound, value < bound);
}
Check check_at_most(std::string name, double value, double bound) {
  return make(std::move(name), value, "<=", bound, value <= bound);
}
Check check_greater(std::string name, double value, double bound) {
  return make(std::move(name), value, ">", bound, value > bound);
}
Check check_within(std::string name, double value, double target, double tolerance) {
  return make(std::move(name), value, "within", tolerance, std::abs(value - target) <= tolerance, target);
}
Check check_true(std::string name, bool condition) {
  return make(std::move(name), condition ? 1.0 : 0.0, "==", 1.0, condition);
}

bool CriterionReport::passed() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void Hygiene::absorb(const EvolutionResult& run, const std::string& label) {
  track(run.max_trace_drift, max_trace_drift, drift_source, label, true);
  track(run.min_eigenvalue, min_eigenvalue, eigenvalue_source, label, false);
  track(run.max_leakage, max_leakage, leakage_source, label, true);
  sources.push_back(label);
}

void Hygiene::absorb(const DensityMatrix& state, const std::string& label) {
  track(std::abs(state.trace() - 1.0), max_trace_drift, drift_source, label, true);
  track(state.min_eigenvalue(), min_eigenvalue, eigenvalue_source, label, false);
  track(state.boundary_population(), max_leakage, leakage_source, label, true);
  sources.push_back(label);
}

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "representation equivalence";
    case 2: return "free revival and negativity";
    case 3: return "moment laws";
    case 4: return "frictionless-diffusion kernel";
    case 5: return "free-rotor equilibrium";
    case 6: return "Gibbs residual scaling";
    case 7: return "equilibrium vs Gibbs temperature sweep";
    case 8: return "thermalization scenarios";
    case 9: return "classical limit";
    case 10: return "numerical hygiene";
    default: return "unknown";
  }
}

std::vector<CriterionReport> run_acceptance(const AcceptanceOptions& options) {
  Suite suite;
  suite.workers = options.workers;
  using Step = void (Suite::*)(CriterionReport&);
  const Step steps[] = {&Suite::representation_equivalence, &Suite::revival,          &Suite::moment_laws,
                        &Suite::diffusion_oracle,           &Suite::free_equilibrium_profile,
                        &Suite::gibbs_residual_scaling,     &Suite::fig4_sweep,       &Suite::thermalization,
                        &Suite::classical_limit,            &Suite::numerical_hygiene};
  std::vector<CriterionReport> reports;
  for (int id = 1; id <= 10; ++id) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    CriterionReport rep;
    rep.id = id;
    rep.title = criterion_title(id);
    const auto start = std::chrono::steady_clock::now();
    try {
      (suite.*steps[id - 1])(rep);
    } catch (const std::exception& e) {
      rep.error = e.what();
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.on_report) options.on_report(rep);
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace rotor
