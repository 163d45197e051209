#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rotor/classical_fp.hpp"
#include "rotor/errors.hpp"
#include "rotor/operators.hpp"

using namespace rotor;
using std::numbers::pi;

namespace {

FpParams free_params(double gamma, double diffusion) {
  FpParams p;
  p.gamma = gamma;
  p.diffusion = diffusion;
  return p;
}

ClassicalField centred_gaussian(const ClassicalGrid& g, double width, double p0 = 0.0) {
  ClassicalField f(g);
  for (int j = 0; j < g.n_p; ++j)
    for (int i = 0; i < g.n_alpha; ++i)
      f.at(i, j) = std::exp(-0.5 * std::pow((g.p(j) - p0) / width, 2)) * (1 + 0.3 * std::cos(g.alpha(i)));
  const double m = f.mass();
  for (auto& x : f.values) x /= m;
  return f;
}

}  // namespace

TEST_CASE("grid geometry") {
  const ClassicalGrid g{8, 10, 5.0};
  CHECK(g.alpha(0) == doctest::Approx(-pi));
  CHECK(g.p(0) == doctest::Approx(-5.0 + 0.5));
  CHECK(g.p(9) == doctest::Approx(4.5));
  CHECK(ClassicalGrid::thermal(8, 8, 4.0, 1.0).p_max == doctest::Approx(12.0));
}

TEST_CASE("classical Gibbs state is stationary to second order in dp") {
  const auto v = PotentialSpec::double_well(4.0);
  const BathParams bath(4.0, 2.0);
  const auto params = FpParams::thermal(v, bath);
  double prev = 0.0;
  for (int np : {256, 512, 1024}) {
    const auto grid = ClassicalGrid::thermal(64, np, bath.temperature(), 1.0);
    const double r = stationarity_residual(classical_gibbs(grid, v, bath.temperature(), 1.0), params);
    if (prev > 0) CHECK(prev / r == doctest::Approx(4.0).epsilon(0.1));
    prev = r;
  }
  CHECK(prev < 2e-4);
}

TEST_CASE("pure diffusion spreads momentum linearly") {
  const ClassicalGrid g{16, 256, 20.0};
  const auto f0 = centred_gaussian(g, 1.0);
  const double D = 0.5;
  const auto params = free_params(0.0, D);
  const auto f1 = fp_evolve(f0, params, 1.0, fp_max_step(g, params));
  CHECK(f1.mean_p2() - f0.mean_p2() == doctest::Approx(2 * D).epsilon(1e-6));
  CHECK(f1.mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("friction damps the mean momentum") {
  const ClassicalGrid g{16, 256, 20.0};
  const auto f0 = centred_gaussian(g, 1.0, 2.0);
  const auto params = free_params(0.7, 0.4);
  const auto f1 = fp_evolve(f0, params, 1.0, fp_max_step(g, params));
  CHECK(f1.mean_p() == doctest::Approx(f0.mean_p() * std::exp(-0.7)).epsilon(1e-6));
}

TEST_CASE("mass is conserved with a potential") {
  const auto v = PotentialSpec::double_well(2.0);
  const BathParams bath(1.0, 1.0);
  const auto grid = ClassicalGrid::thermal(32, 96, 1.0, 1.0);
  const auto params = FpParams::thermal(v, bath);
  const auto f = fp_evolve(classical_wavepacket(grid, 0.4, 0.5, 0.5), params, 0.5, fp_max_step(grid, params));
  CHECK(f.mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("steps above the stability limit are rejected") {
  const ClassicalGrid g{16, 64, 10.0};
  const auto params = free_params(1.0, 1.0);
  const auto f = centred_gaussian(g, 1.0);
  CHECK_THROWS_AS(fp_step(f, params, 3 * fp_max_step(g, params)), std::invalid_argument);
  CHECK_NOTHROW(fp_step(f, params, fp_max_step(g, params)));
}

TEST_CASE("half-integer weight shrinks towards the classical limit") {
  const auto v = PotentialSpec::double_well(1.0);
  double prev = 1.0;
  for (double hbar : {1.0, 0.5, 0.25}) {
    const BathParams bath(1.0, 1.0, hbar, 1.0);
    const int M = gibbs_truncation(v, bath, 1e-12);
    const double w = half_integer_weight(gibbs_state(v, bath, M, 1e-12), 4 * M + 2);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("quantum-classical comparison needs a fine angle grid") {
  const auto rho = build_wavepacket(0.4, 0.0, 10);
  const ClassicalGrid coarse{16, 64, 10.0};
  CHECK_THROWS_AS(quantum_classical_compare(rho, 1.0, ClassicalField(coarse)), AliasingError);
  const ClassicalGrid fine{64, 64, 10.0};
  const auto c = quantum_classical_compare(rho, 1.0, classical_wavepacket(fine, 0.4, 0.0, 1.0));
  CHECK(c.l1_distance < 0.2);
  CHECK(c.classical_mass_outside < 1e-6);
}
