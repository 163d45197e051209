#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rotor/errors.hpp"
#include "rotor/metrics.hpp"
#include "rotor/oracles.hpp"
#include "rotor/propagator.hpp"

using namespace rotor;
using std::numbers::pi;

namespace {

GeneratorSpec free_unitary() {
  GeneratorSpec spec;
  spec.mode = GeneratorMode::unitary_only;
  return spec;
}

GeneratorSpec small_full(Representation rep = Representation::aux_wigner) {
  GeneratorSpec spec;
  spec.bath = BathParams(2.0, 0.6, 1.0, 1.0);
  spec.potential = PotentialSpec::double_well(1.5);
  spec.representation = rep;
  return spec;
}

EvolutionConfig fixed(double t_final, double dt) {
  EvolutionConfig cfg;
  cfg.t_final = t_final;
  cfg.dt = dt;
  return cfg;
}

}  // namespace

TEST_CASE("free wave packet revives at t_r") {
  const int M = 36;
  const auto rho0 = build_wavepacket(0.1, 0.0, M);
  const double tr = revival_time();
  auto cfg = fixed(tr, tr / 20000);
  // RK4 phase errors on the fast coherences make small negative eigenvalues
  cfg.positivity_threshold = -1e-4;
  cfg.snapshot_times = {tr / 32};
  const auto r = evolve(rho0, free_unitary(), cfg);
  CHECK(fidelity(r.final_state, rho0) >= 1 - 1e-6);
  REQUIRE(r.snapshots.size() == 1);
  CHECK(full_wigner(r.snapshots[0].rho, 4 * M + 2).min() < 0.0);
  CHECK(r.max_trace_drift < 1e-9);
}

TEST_CASE("mean momentum decays at the friction rate") {
  GeneratorSpec spec;
  spec.bath = BathParams(20.0, 0.5);
  const int M = 40;
  const auto rho0 = build_wavepacket(0.5, 0.3, M);
  // give the packet a mean momentum through a superposition of boosted states
  Vector psi = wavepacket_amplitudes(0.5, 0.3, M);
  Vector boosted = Vector::Zero(psi.size());
  for (int i = 0; i + 3 < psi.size(); ++i) boosted(i + 3) = psi(i);
  const auto start = DensityMatrix::from_pure(M, boosted);
  auto cfg = fixed(2.0, suggested_step(spec, M, 0.5));
  const auto r = evolve(start, spec, cfg);
  const double p0 = start.mean_momentum();
  REQUIRE(std::abs(p0) > 2.0);
  for (std::size_t i = 0; i < r.series.size(); i += 20)
    CHECK(r.series.mean_p[i] == doctest::Approx(p0 * std::exp(-0.5 * r.series.t[i])).epsilon(1e-7));
  CHECK(rho0.trace() == doctest::Approx(1.0));
}

TEST_CASE("adaptive and fixed RK4 agree") {
  const auto spec = small_full();
  const int M = 10;
  const auto rho0 = build_wavepacket(0.4, 0.5, M);
  const auto a = evolve(rho0, spec, fixed(1.0, suggested_step(spec, M, 0.1)));
  EvolutionConfig cfg;
  cfg.t_final = 1.0;
  cfg.dt = 1e-3;
  cfg.integrator = Integrator::rk4_adaptive;
  cfg.tolerance = 1e-10;
  const auto b = evolve(rho0, spec, cfg);
  CHECK(trace_distance(a.final_state, b.final_state) < 1e-8);
  CHECK(b.steps > 0);
}

TEST_CASE("RK4 global error is fourth order") {
  const auto spec = small_full();
  const int M = 14;
  const auto rho0 = build_wavepacket(0.5, 1.0, M);
  const double t = 0.5;
  const double h = suggested_step(spec, M, 1.0);
  // one sample at the end keeps the steps uniform
  auto run = [&](double dt) {
    auto cfg = fixed(t, dt);
    cfg.record_interval = t;
    return evolve(rho0, spec, cfg).final_state;
  };
  const auto ref = run(h / 64);
  const double e1 = trace_distance(run(h / 2), ref);
  const double e2 = trace_distance(run(h / 4), ref);
  REQUIRE(e2 > 1e-13);
  CHECK(std::log2(e1 / e2) >= 3.7);
}

TEST_CASE("matrix and aux trajectories agree") {
  const int M = 8;
  const auto rho0 = testing::random_state(M, 11, 3);
  auto cfg = fixed(0.5, 2e-4);
  cfg.abort_on_leakage = false;
  const auto a = evolve(rho0, small_full(Representation::aux_wigner), cfg);
  const auto b = evolve(rho0, small_full(Representation::matrix), cfg);
  CHECK(trace_distance(a.final_state, b.final_state) < 1e-9);
}

TEST_CASE("snapshots land on the requested times") {
  const auto spec = small_full();
  auto cfg = fixed(1.0, 0.03);
  cfg.snapshot_times = {0.0, 0.1, 0.55, 1.0};
  const auto r = evolve(build_wavepacket(0.4, 0.0, 10), spec, cfg);
  REQUIRE(r.snapshots.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.snapshots[i].t == cfg.snapshot_times[i]);
  CHECK(r.series.t.front() == 0.0);
  CHECK(r.series.t.back() == 1.0);
}

TEST_CASE("leakage through the basis edge aborts") {
  GeneratorSpec spec;
  spec.bath = BathParams(50.0, 1.0);
  const int M = 8;
  CHECK_THROWS_AS(evolve(DensityMatrix::momentum_eigenstate(M, M - 1), spec, fixed(0.5, 1e-3)), NumericalAbort);
  auto cfg = fixed(0.5, 1e-3);
  cfg.abort_on_leakage = false;
  cfg.check_positivity = false;
  CHECK(evolve(DensityMatrix::momentum_eigenstate(M, M - 1), spec, cfg).max_leakage > 1e-8);
}

TEST_CASE("invalid configurations are rejected") {
  auto cfg = fixed(1.0, -1.0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = fixed(1.0, 0.1);
  cfg.snapshot_times = {2.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(parse_integrator(to_string(Integrator::rk4_adaptive)) == Integrator::rk4_adaptive);
}

TEST_CASE("free steady state is the squared binomial profile") {
  GeneratorSpec spec;
  spec.bath = BathParams(5.0, 1.0);
  const int M = 40;
  const auto ss = find_steady_state(spec, DensityMatrix::maximally_mixed(M));
  CHECK(ss.residual < 1e-9);
  const auto& mat = ss.state.matrix();
  CHECK((mat - Matrix(mat.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(trace_distance(ss.state, free_equilibrium_exact(5.0, 1.0, 1.0, M)) < 1e-8);
  CHECK(trace_distance(ss.state, free_equilibrium(5.0, 1.0, 1.0, M).state) <= 1e-2);
}

TEST_CASE("steady state from the two methods") {
  const auto spec = small_full();
  const int M = 16;
  const auto seed = gibbs_state(spec.potential, spec.bath, M);
  SteadyStateConfig rk;
  rk.method = SteadyStateMethod::rk4;
  rk.tolerance = 1e-8;
  const auto a = find_steady_state(spec, seed);
  const auto b = find_steady_state(spec, seed, rk);
  CHECK(trace_distance(a.state, b.state) < 1e-7);
  CHECK(generator_residual(total_generator(spec, M), a.state, true) < 1e-9);
}

TEST_CASE("steady state needs friction") {
  GeneratorSpec spec;
  spec.mode = GeneratorMode::unitary_only;
  CHECK_THROWS(find_steady_state(spec, DensityMatrix::maximally_mixed(4)));
}
