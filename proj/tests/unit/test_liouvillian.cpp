#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rotor/errors.hpp"
#include "rotor/liouvillian.hpp"
#include "rotor/metrics.hpp"

using namespace rotor;
using std::numbers::pi;

namespace {

double max_abs_diff(const AuxWignerField& a, const AuxWignerField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

GeneratorSpec make_spec(GeneratorMode mode, Representation rep, double hbar = 1.0) {
  GeneratorSpec spec;
  spec.bath = BathParams(3.0, 0.7, hbar, 1.3);
  spec.potential = PotentialSpec({{1, 1.5, 0.4}, {2, -1.5, 0.0}, {3, 0.2, -0.6}});
  spec.mode = mode;
  spec.representation = rep;
  spec.frictionless_diffusion = 2.2;
  return spec;
}

// tr(p^k drho)
double moment(const DensityMatrix& d, int power, double hbar) {
  double s = 0.0;
  for (int m = -d.truncation(); m <= d.truncation(); ++m) s += std::pow(hbar * m, power) * d(m, m).real();
  return s;
}

}  // namespace

TEST_CASE("kinetic term") {
  const BathParams bath(1.0, 1.0);
  const auto d = apply_kinetic(to_aux(testing::random_state(4, 1)), bath);
  for (int k = -8; k <= 8; k += 2) CHECK(d.coeff({0}, k) == cplx{});
  const auto eig = apply_kinetic(to_aux(DensityMatrix::momentum_eigenstate(4, 1)), bath);
  for (const auto& c : eig.data()) CHECK(c == cplx{});
}

TEST_CASE("kinetic term matches the commutator with p^2/2I") {
  const BathParams bath(1.0, 1.0, 0.8, 1.7);
  for (unsigned s = 0; s < 5; ++s) {
    const auto rho = testing::random_state(5, s);
    const auto ref = to_aux(kinetic_matrix(rho, bath));
    CHECK(max_abs_diff(apply_kinetic(to_aux(rho), bath), ref) < 1e-12);
  }
}

TEST_CASE("potential term") {
  const PotentialSpec v = PotentialSpec::double_well(2.0);
  SUBCASE("zero potential") {
    const auto d = apply_potential(to_aux(testing::random_state(4, 2)), {}, 1.0);
    for (const auto& c : d.data()) CHECK(c == cplx{});
  }
  SUBCASE("matches -(i/hbar)[V, rho]") {
    for (unsigned s = 0; s < 10; ++s) {
      const auto rho = testing::random_state(6, 100 + s);
      const double hbar = 0.5 + 0.1 * s;
      const auto ref = to_aux(potential_commutator_matrix(rho, v, hbar));
      CHECK(max_abs_diff(apply_potential(to_aux(rho), v, hbar), ref) < 1e-12);
    }
  }
  SUBCASE("sine harmonics") {
    const PotentialSpec w({{1, 0.0, 1.0}, {3, 0.3, -0.8}});
    const auto rho = testing::random_state(6, 7);
    CHECK(max_abs_diff(apply_potential(to_aux(rho), w, 1.0), to_aux(potential_commutator_matrix(rho, w, 1.0))) <
          1e-12);
  }
  SUBCASE("one harmonic on the m = 0 state") {
    const PotentialSpec a1({{1, 1.0, 0.0}});
    const auto d = apply_potential(to_aux(DensityMatrix::momentum_eigenstate(3, 0)), a1, 1.0);
    for (int n = -6; n <= 6; ++n) {
      for (int k = -6; k <= 6; ++k) {
        const bool expected = (n == 1 || n == -1) && (k == 1 || k == -1);
        CHECK((std::abs(d.coeff({n}, k)) > 1e-3) == expected);
      }
    }
  }
}

TEST_CASE("momentum diffusion of the uniform state") {
  const double D = 1.7, hbar = 0.6;
  const auto spec = GeneratorSpec::frictionless(D, {}, hbar);
  const auto d = apply_dissipator(to_aux(DensityMatrix::momentum_eigenstate(3, 0)), spec);
  const double unit = D / (2.0 * pi * hbar * hbar);
  CHECK(std::abs(d.coeff(HalfIndex::integer(1), 0) - unit) < 1e-14);
  CHECK(std::abs(d.coeff(HalfIndex::integer(-1), 0) - unit) < 1e-14);
  CHECK(std::abs(d.coeff(HalfIndex::integer(0), 0) + 2.0 * unit) < 1e-14);
}

TEST_CASE("dissipator forms agree in every mode") {
  for (auto mode : {GeneratorMode::full, GeneratorMode::no_angular_diffusion, GeneratorMode::diffusion_only,
                    GeneratorMode::unitary_only}) {
    const auto spec = make_spec(mode, Representation::aux_wigner, 0.7);
    for (unsigned s = 0; s < 10; ++s) {
      const auto rho = testing::random_state(6, 200 + s);
      const auto ref = to_aux(dissipator_matrix(rho, spec));
      CHECK(max_abs_diff(apply_dissipator(to_aux(rho), spec), ref) < 1e-12);
    }
  }
}

TEST_CASE("dissipator matrix is traceless, Hermitian, and damps <p>") {
  const auto spec = make_spec(GeneratorMode::full, Representation::matrix, 0.9);
  for (unsigned s = 0; s < 10; ++s) {
    const auto rho = testing::random_state(8, 300 + s, 1);
    const Matrix raw = dissipator_matrix(rho, spec).matrix();
    CHECK(std::abs(raw.trace()) < 1e-13);
    const auto d = dissipator_matrix(rho, spec);
    CHECK(max_abs(d.matrix() - d.matrix().adjoint()) < 1e-13);
    const double p = rho.mean_momentum(0.9);
    CHECK(std::abs(moment(d, 1, 0.9) + spec.bath.gamma() * p) < 1e-10 * std::max(1.0, std::abs(p)));
  }
}

TEST_CASE("second moment of a momentum eigenstate") {
  const double hbar = 0.8;
  for (int m : {0, 2, -3}) {
    const auto rho = DensityMatrix::momentum_eigenstate(8, m);
    auto spec = make_spec(GeneratorMode::no_angular_diffusion, Representation::aux_wigner, hbar);
    spec.potential = {};
    const double D = spec.bath.diffusion(), G = spec.bath.gamma();
    const double p2 = hbar * hbar * m * m;
    CHECK(moment(from_aux(apply_dissipator(to_aux(rho), spec)), 2, hbar) == doctest::Approx(2 * D - 2 * G * p2));
    // the angular-diffusion line adds (Gamma eps1 / 8) <p^2>
    spec.mode = GeneratorMode::full;
    const double extra = G * spec.bath.epsilon1() / 8.0 * p2;
    CHECK(moment(from_aux(apply_dissipator(to_aux(rho), spec)), 2, hbar) ==
          doctest::Approx(2 * D - 2 * G * p2 + extra));
  }
}

TEST_CASE("angular diffusion is an eps1 correction on thermal states") {
  auto ratio = [](double T) {
    GeneratorSpec spec;
    spec.bath = BathParams(T, 1.0);
    spec.mode = GeneratorMode::full;
    const auto rho = gibbs_state({}, spec.bath, 48);
    const Matrix full = dissipator_matrix(rho, spec).matrix();
    spec.mode = GeneratorMode::no_angular_diffusion;
    const Matrix partial = dissipator_matrix(rho, spec).matrix();
    spec.mode = GeneratorMode::diffusion_only;
    spec.frictionless_diffusion = spec.bath.diffusion();
    const Matrix line1 = dissipator_matrix(rho, spec).matrix();
    return trace_norm_hermitian(full - partial) / trace_norm_hermitian(line1);
  };
  const double r1 = ratio(20.0), r2 = ratio(40.0);
  CHECK(r1 < 0.05);
  CHECK(r2 / r1 == doctest::Approx(0.5).epsilon(0.2));
  GeneratorSpec spec;
  spec.mode = GeneratorMode::no_angular_diffusion;
  CHECK(spec.angular_diffusion() == 0.0);
}

TEST_CASE("total generator") {
  SUBCASE("unitary part leaves the Gibbs state invariant") {
    for (auto rep : {Representation::matrix, Representation::aux_wigner}) {
      auto spec = make_spec(GeneratorMode::unitary_only, rep);
      const auto rho = gibbs_state(spec.potential, spec.bath, 24);
      const Generator g(spec, 24);
      const auto d = g.unflatten([&] {
        std::vector<cplx> out(g.state_size());
        const auto in = g.flatten(rho);
        g.apply(in, out);
        return out;
      }());
      CHECK(max_abs(d.matrix()) < 1e-10);
    }
  }
  SUBCASE("representations agree") {
    for (auto mode : {GeneratorMode::full, GeneratorMode::diffusion_only}) {
      const Generator gm(make_spec(mode, Representation::matrix, 0.6), 7);
      const Generator ga(make_spec(mode, Representation::aux_wigner, 0.6), 7);
      for (unsigned s = 0; s < 10; ++s) {
        const auto rho = testing::random_state(7, 400 + s, 1);
        const auto dm = gm(rho);
        const auto da = ga(to_aux(rho));
        CHECK(max_abs_diff(to_aux(dm), da) < 1e-12);
        CHECK(std::abs(dm.matrix().trace()) < 1e-12);
        CHECK(std::abs(da.normalization()) < 1e-12);
      }
    }
  }
  SUBCASE("linear") {
    const Generator g(make_spec(GeneratorMode::full, Representation::aux_wigner), 5);
    const auto r1 = to_aux(testing::random_state(5, 1)), r2 = to_aux(testing::random_state(5, 2));
    AuxWignerField mix(5);
    const cplx a(0.3, 0.0), b(-1.2, 0.0);
    for (std::size_t i = 0; i < mix.size(); ++i) mix.data()[i] = a * r1.data()[i] + b * r2.data()[i];
    const auto lhs = g(mix), g1 = g(r1), g2 = g(r2);
    double err = 0.0;
    for (std::size_t i = 0; i < mix.size(); ++i)
      err = std::max(err, std::abs(lhs.data()[i] - a * g1.data()[i] - b * g2.data()[i]));
    CHECK(err < 1e-12);
  }
  SUBCASE("representation mismatch") {
    const Generator g(make_spec(GeneratorMode::full, Representation::matrix), 3);
    CHECK_THROWS_AS(g(to_aux(testing::random_state(3, 0))), RepresentationError);
  }
}

TEST_CASE("mode names round trip") {
  for (auto mode : {GeneratorMode::full, GeneratorMode::unitary_only, GeneratorMode::diffusion_only,
                    GeneratorMode::no_angular_diffusion})
    CHECK(parse_mode(to_string(mode)) == mode);
  CHECK_THROWS_AS(parse_mode("lossy"), ConfigError);
}
