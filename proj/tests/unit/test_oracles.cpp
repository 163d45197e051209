#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rotor/metrics.hpp"
#include "rotor/oracles.hpp"
#include "rotor/propagator.hpp"

using namespace rotor;
using std::numbers::pi;

TEST_CASE("free shear is the identity at the revival time") {
  const auto field = to_aux(testing::random_state(6, 3));
  const auto back = free_shear(field, revival_time(0.7, 1.3), 0.7, 1.3);
  for (std::size_t i = 0; i < field.size(); ++i) CHECK(std::abs(back.data()[i] - field.data()[i]) < 1e-12);
}

TEST_CASE("free shear matches unitary integration") {
  const int M = 12;
  const auto rho0 = build_wavepacket(0.3, 0.4, M);
  GeneratorSpec spec;
  spec.mode = GeneratorMode::unitary_only;
  const double t = 0.37 * revival_time();
  EvolutionConfig cfg;
  cfg.t_final = t;
  cfg.dt = 2e-4;
  const auto r = evolve(rho0, spec, cfg);
  CHECK(trace_distance(from_aux(free_shear(to_aux(rho0), t)), r.final_state) < 1e-9);
}

TEST_CASE("diffusion kernel is normalised") {
  for (double x : {0.1, 1.0, 10.0}) {
    for (double hbar : {1.0, 0.5}) {
      const double t = 0.8;
      const double D = x * hbar * hbar / t;
      const auto k = diffusion_kernel(t, D, 16, 256, hbar);
      CHECK(std::abs(k.normalization() - 1.0) < 1e-9);
      CHECK(std::abs(k.normalization_quadrature() - 1.0) < 1e-9);
      CHECK(k.max_imaginary < 1e-12);
    }
  }
}

TEST_CASE("as-printed kernel loses normalisation away from hbar = 1") {
  const double hbar = 0.5;
  const auto k = diffusion_kernel(0.8, 1.0, 8, 128, hbar, 1.0, KernelConvention::as_printed);
  CHECK(std::abs(k.normalization() - 1.0) > 1e-3);
  const auto unit = diffusion_kernel(0.8, 1.0, 8, 128, 1.0, 1.0, KernelConvention::as_printed);
  CHECK(std::abs(unit.normalization() - 1.0) < 1e-9);
}

TEST_CASE("winding cutoff grows with diffusion") {
  const int a = winding_cutoff(1.0, 0.1, 1.0);
  const int b = winding_cutoff(1.0, 10.0, 1.0);
  CHECK(a < b);
  CHECK(std::exp(-20.0) * std::cyl_bessel_i(b, 20.0) < 1e-12);
}

TEST_CASE("diffusion solution at t = 0 is the identity") {
  const auto field = to_aux(testing::random_state(5, 8));
  const auto same = apply_diffusion_solution(field, 0.0, 3.0);
  for (std::size_t i = 0; i < field.size(); ++i) CHECK(std::abs(same.data()[i] - field.data()[i]) < 1e-14);
}

TEST_CASE("diffusion solution matches integration") {
  const double hbar = 0.8;
  const double D = 0.3;
  const int M = 24;
  const auto rho0 = build_wavepacket(0.3, 0.2, M).padded(M);
  const auto spec = GeneratorSpec::frictionless(D, {}, hbar, 1.1);
  const double t = 0.5 * hbar * hbar / D;
  EvolutionConfig cfg;
  cfg.t_final = t;
  cfg.dt = suggested_step(spec, M, 0.05);
  const auto r = evolve(rho0, spec, cfg);
  const auto exact = from_aux(apply_diffusion_solution(to_aux(rho0), t, D, hbar, 1.1));
  CHECK(trace_distance(exact, r.final_state) < 1e-6);
}

TEST_CASE("diffusion solution preserves parity") {
  const auto rho0 = build_wavepacket(0.3, 0.0, 20);
  const auto out = from_aux(apply_diffusion_solution(to_aux(rho0), 0.4, 1.0));
  for (int m = -20; m <= 20; ++m) CHECK(std::abs(out(m, m) - out(-m, -m)) < 1e-14);
}

TEST_CASE("free equilibrium profiles") {
  const int M = 60;
  const auto approx = free_equilibrium(20.0, 1.0, 1.0, M);
  const auto exact = free_equilibrium_exact(20.0, 1.0, 1.0, M);
  CHECK(approx.a == 20.0);
  for (int m = 1; m <= M; ++m) CHECK(approx.state(m, m).real() == doctest::Approx(approx.state(-m, -m).real()));
  CHECK(approx.state.mean_momentum_squared() == doctest::Approx(20.0).epsilon(0.05));
  CHECK(exact.mean_momentum_squared() == doctest::Approx(20.0).epsilon(0.05));
  CHECK(trace_distance(approx.state, exact) < 1e-2);
}

TEST_CASE("Gibbs residual scalings") {
  const auto v = PotentialSpec::double_well(1.0);
  const BathParams cold(4.0, 1.0);
  const BathParams hot(8.0, 1.0);
  const auto f0 = gibbs_residual({}, cold, 40);
  const auto f1 = gibbs_residual({}, hot, 48);
  CHECK(std::log2(f1.residual / f0.residual) == doctest::Approx(-1.0).epsilon(0.15));
  CHECK(f1.epsilon1 == doctest::Approx(f0.epsilon1 / 2));
  const auto p0 = gibbs_residual(v, cold, 40);
  const auto p1 = gibbs_residual(v, hot, 48);
  CHECK(std::log2(p1.potential_part / p0.potential_part) == doctest::Approx(-2.0).epsilon(0.15));
  CHECK(f0.potential_part < 1e-12);
}
