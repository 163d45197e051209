#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rotor/errors.hpp"
#include "rotor/metrics.hpp"
#include "rotor/operators.hpp"
#include "rotor/special.hpp"
#include "rotor/state.hpp"

using namespace rotor;
using std::numbers::pi;

namespace {

// |<alpha|psi>|^2 summed directly from the momentum amplitudes.
double density_from_amplitudes(const Vector& psi, int M, double alpha) {
  cplx s{};
  for (int m = -M; m <= M; ++m) s += psi(m + M) * std::polar(1.0, m * alpha);
  return std::norm(s) / (2.0 * pi);
}

// Closed form of the auxiliary rows for the periodic Gaussian packet:
// W_nu(alpha) = I_{2 nu}(cos(alpha - alpha0)/sigma^2) / (2 pi I_0(1/sigma^2)).
double packet_row(double sigma, double alpha0, int twice_nu, double alpha) {
  const double inv = 1.0 / (sigma * sigma);
  const double x = std::cos(alpha - alpha0) * inv;
  return bessel_i_scaled_signed(std::abs(twice_nu), x) * std::exp(std::abs(x) - inv) /
         (2.0 * pi * bessel_i_scaled(0, inv));
}

}  // namespace

TEST_CASE("wide wave packet is the m = 0 state") {
  const auto rho = build_wavepacket(1e6, 0.0, 4);
  CHECK(std::abs(rho(0, 0) - 1.0) < 1e-10);
}

TEST_CASE("narrow wave packet reproduces its angle density") {
  const int M = 48;
  const auto psi = wavepacket_amplitudes(0.1, 0.0, M);
  for (double alpha : angle_grid(97)) {
    CHECK(std::abs(density_from_amplitudes(psi, M, alpha) - wavepacket_angle_density(0.1, 0.0, alpha)) < 1e-8);
  }
}

TEST_CASE("wave packet phases match quadrature of the angle wave function") {
  const int M = 24;
  const double sigma = 0.3;
  const double alpha0 = pi / 2;
  const auto psi = wavepacket_amplitudes(sigma, alpha0, M);
  const int n = 512;
  const double norm = std::sqrt(2.0 * pi * bessel_i_scaled(0, 1.0 / (sigma * sigma)));
  for (int m = -6; m <= 6; ++m) {
    cplx q{};
    for (int i = 0; i < n; ++i) {
      const double a = -pi + 2.0 * pi * i / n;
      const double s = std::sin(0.5 * (a - alpha0));
      const double wave = std::exp(-s * s / (sigma * sigma)) / norm;
      q += std::polar(wave, -m * a);
    }
    q *= (2.0 * pi / n) / std::sqrt(2.0 * pi);
    CHECK(std::abs(psi(m + M) - q) < 1e-10);
  }
  const auto centred = wavepacket_amplitudes(sigma, 0.0, M);
  for (int m = -M; m <= M; ++m) CHECK(std::abs(psi(m + M) - std::polar(1.0, -m * pi / 2) * centred(m + M)) < 1e-14);
}

TEST_CASE("truncation overflow is reported") { CHECK_THROWS_AS(build_wavepacket(0.1, 0.0, 10), TruncationError); }

TEST_CASE("superposition") {
  const int M = 3;
  SUBCASE("single state") {
    const auto psi = testing::random_pure(M, 4);
    const auto rho = superpose({psi}, {1.0}, M);
    CHECK((rho.matrix() - DensityMatrix::from_pure(M, psi).matrix()).norm() < 1e-14);
  }
  SUBCASE("momentum eigenstates") {
    Vector up = Vector::Zero(2 * M + 1), down = Vector::Zero(2 * M + 1);
    up(1 + M) = 1.0;
    down(-1 + M) = 1.0;
    const auto rho = superpose({up, down}, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, M);
    CHECK(std::abs(rho(1, -1) - 0.5) < 1e-15);
  }
  SUBCASE("zero norm") {
    const auto psi = testing::random_pure(M, 5);
    CHECK_THROWS(superpose({psi, psi}, {1.0, -1.0}, M));
  }
  SUBCASE("two packets") {
    const int N = 24;
    const auto left = wavepacket_amplitudes(0.3, pi / 2, N), right = wavepacket_amplitudes(0.3, -pi / 2, N);
    const auto rho = superpose({left, right}, {1.0, 1.0}, N);
    const Matrix mixture = 0.5 * (DensityMatrix::from_pure(N, left).matrix() + DensityMatrix::from_pure(N, right).matrix());
    const auto mg = marginals(to_aux(rho), 128);
    CHECK(mg.angle_density[96] > 10 * mg.angle_density[64]);
    CHECK(mg.angle_density[32] > 10 * mg.angle_density[64]);
    // odd momenta cancel; the coherence shows up as a difference from the mixture
    CHECK(std::abs(rho(1, 1)) < 1e-14);
    CHECK(trace_norm_hermitian(rho.matrix() - mixture) > 0.5);
  }
}

TEST_CASE("aux field of the m = 0 state") {
  const auto field = to_aux(DensityMatrix::momentum_eigenstate(3, 0));
  CHECK(std::abs(field.coeff(HalfIndex::integer(0), 0) - 1.0 / (2.0 * pi)) < 1e-16);
  double rest = 0.0;
  for (const auto& c : field.data()) rest += std::abs(c);
  CHECK(rest == doctest::Approx(1.0 / (2.0 * pi)));
}

TEST_CASE("aux round trip is exact") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto rho = testing::random_state(7, seed);
    const auto back = from_aux(to_aux(rho));
    CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("aux rows are real and normalised") {
  const auto field = to_aux(DensityMatrix::from_pure(6, testing::random_pure(6, 11)));
  CHECK(field.normalization() == doctest::Approx(1.0).epsilon(1e-14));
  for (int n = -12; n <= 12; ++n)
    for (double a : angle_grid(16)) CHECK(std::abs(field.evaluate({n}, a).imag()) < 1e-12);
}

TEST_CASE("aux rows of the wave packet match the Bessel closed form") {
  const int M = 40;
  const double sigma = 0.3, alpha0 = 0.7;
  const auto field = to_aux(build_wavepacket(sigma, alpha0, M));
  for (int n : {-5, -2, -1, 0, 1, 3, 6}) {
    for (double a : angle_grid(40)) CHECK(std::abs(field.evaluate({n}, a).real() - packet_row(sigma, alpha0, n, a)) < 1e-8);
  }
}

TEST_CASE("full Wigner of the m = 0 state") {
  const auto w = full_wigner(DensityMatrix::momentum_eigenstate(4, 0), 18);
  for (int i = 0; i < w.n_alpha; ++i)
    for (int m = -4; m <= 4; ++m) CHECK(std::abs(w.at(i, m) - (m == 0 ? 1.0 / (2.0 * pi) : 0.0)) < 1e-15);
}

TEST_CASE("full Wigner of the wave packet follows the sinc-sum formula") {
  const int M = 60;
  const double sigma = 0.1;
  const auto w = full_wigner(build_wavepacket(sigma, 0.0, M), 4 * M + 2);
  for (int i = 0; i < w.n_alpha; i += 7) {
    const double a = w.alpha(i);
    for (int m = -10; m <= 10; ++m) {
      double ref = packet_row(sigma, 0.0, 2 * m, a);
      for (int mp = -3 * M; mp <= 3 * M; ++mp) ref += sinc((m - mp - 0.5) * pi) * packet_row(sigma, 0.0, 2 * mp + 1, a);
      CHECK(std::abs(w.at(i, m) - ref) < 1e-8);
    }
  }
}

TEST_CASE("full Wigner normalisation and marginals") {
  const int M = 6;
  const Vector psi = testing::random_pure(M, 3);
  const auto rho = DensityMatrix::from_pure(M, psi);
  const auto w = full_wigner(rho, 4 * M + 2);
  const auto pm = w.momentum_marginal();
  double total = 0.0;
  for (int m = -M; m <= M; ++m) {
    CHECK(std::abs(pm[m + M] - rho(m, m).real()) < 1e-12);
    total += pm[m + M];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  const auto am = w.angle_marginal();
  for (int i = 0; i < w.n_alpha; ++i) CHECK(std::abs(am[i] - density_from_amplitudes(psi, M, w.alpha(i))) < 1e-10);
  CHECK_THROWS_AS(full_wigner(rho, 4 * M + 1), AliasingError);
}

TEST_CASE("marginals of simple states") {
  SUBCASE("momentum eigenstate") {
    const auto mg = marginals(to_aux(DensityMatrix::momentum_eigenstate(5, 3)), 32);
    for (int m = -5; m <= 5; ++m) CHECK(mg.momentum[m + 5] == doctest::Approx(m == 3 ? 1.0 : 0.0));
    for (double d : mg.angle_density) CHECK(d == doctest::Approx(1.0 / (2.0 * pi)));
  }
  SUBCASE("mixed") {
    std::vector<double> pops(11, 0.0);
    pops[5] = pops[6] = 0.5;
    const auto mg = marginals(to_aux(DensityMatrix::diagonal(5, pops)), 32);
    CHECK(mg.momentum[5] == doctest::Approx(0.5));
    CHECK(mg.momentum[6] == doctest::Approx(0.5));
    for (double d : mg.angle_density) CHECK(d == doctest::Approx(1.0 / (2.0 * pi)));
  }
  SUBCASE("narrow packet") {
    const auto mg = marginals(to_aux(build_wavepacket(0.1, 0.0, 48)), 193);
    for (std::size_t i = 0; i < mg.alpha.size(); ++i)
      CHECK(std::abs(mg.angle_density[i] - wavepacket_angle_density(0.1, 0.0, mg.alpha[i])) < 1e-8);
  }
}

TEST_CASE("trace distance") {
  const auto zero = DensityMatrix::momentum_eigenstate(2, 0);
  const auto one = DensityMatrix::momentum_eigenstate(2, 1);
  std::vector<double> pops(5, 0.0);
  pops[2] = pops[3] = 0.5;
  CHECK(trace_distance(zero, zero) == doctest::Approx(0.0));
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0));
  CHECK(trace_distance(DensityMatrix::diagonal(2, pops), zero) == doctest::Approx(0.5));
  for (unsigned s = 0; s < 10; ++s) {
    const auto a = testing::random_state(4, 3 * s), b = testing::random_state(4, 3 * s + 1),
               c = testing::random_state(4, 3 * s + 2);
    CHECK(trace_distance(a, b) >= 0.0);
    CHECK(std::abs(trace_distance(a, b) - trace_distance(b, a)) < 1e-14);
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
  }
}

TEST_CASE("fidelity of pure states is the overlap squared") {
  const auto u = testing::random_pure(4, 1), v = testing::random_pure(4, 2);
  const double overlap = std::norm(u.dot(v));
  CHECK(fidelity(DensityMatrix::from_pure(4, u), DensityMatrix::from_pure(4, v)) ==
        doctest::Approx(overlap).epsilon(1e-8));
}

TEST_CASE("Gibbs state") {
  SUBCASE("free rotor closed form") {
    const BathParams bath(0.5, 1.0);  // hbar^2 / 2 I T = 1
    const auto rho = gibbs_state({}, bath, 8);
    double z = 0.0;
    for (int m = -8; m <= 8; ++m) z += std::exp(-double(m * m));
    for (int m = -8; m <= 8; ++m) CHECK(std::abs(rho(m, m).real() - std::exp(-double(m * m)) / z) < 1e-14);
  }
  SUBCASE("commutes with H") {
    const Scaling s(0.5);
    const auto v = s.potential({{1, 1.0, 0.0}, {2, -1.0, 0.0}});
    const auto bath = s.bath(0.7, 1.0);
    const auto rho = gibbs_state(v, bath, 32);
    const Matrix h = hamiltonian(v, bath, 32);
    CHECK((h * rho.matrix() - rho.matrix() * h).norm() < 1e-10);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("low temperature sits at the global minimum") {
    const Scaling s(0.5);
    const auto v = s.potential({{1, 1.0, 0.0}, {2, -1.0, 0.0}});
    const auto rho = gibbs_state(v, s.bath(0.2, 1.0), 32);
    const auto mg = marginals(to_aux(rho), 130);
    // alpha = -pi is index 0, alpha = 0 is index 65
    CHECK(mg.angle_density[0] > 20 * mg.angle_density[65]);
  }
  SUBCASE("truncation check") { CHECK_THROWS_AS(gibbs_state({}, BathParams(100.0, 1.0), 5), TruncationError); }
}

TEST_CASE("potential curvature bound of the double well") {
  const auto v = PotentialSpec::double_well(1.0);
  CHECK(v.max_second_derivative() == doctest::Approx(5.0).epsilon(1e-9));
  const BathParams bath(2.0, 1.0, 0.5);
  CHECK(bath.epsilon1() == doctest::Approx(0.125));
  CHECK(bath.epsilon2(v) == doctest::Approx(0.25 * 5.0 / 4.0));
}
