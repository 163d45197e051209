#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rotor/special.hpp"

using namespace rotor;

namespace {

// e^{-x} I_n(x) from the raw power series, summed until terms fall below 1e-13 relative.
double series_oracle(int n, double x) {
  long double term = std::pow(static_cast<long double>(x) / 2.0L, n) / std::tgamma(static_cast<long double>(n + 1));
  long double sum = term;
  for (int j = 1; j < 400; ++j) {
    term *= (static_cast<long double>(x) * x / 4.0L) / (static_cast<long double>(j) * (j + n));
    sum += term;
    if (term < 1e-13L * sum) break;
  }
  return static_cast<double>(sum * std::exp(-static_cast<long double>(x)));
}

}  // namespace

TEST_CASE("bessel at the origin") {
  CHECK(bessel_i_scaled(0, 0.0) == 1.0);
  CHECK(bessel_i_scaled(3, 0.0) == 0.0);
}

TEST_CASE("bessel against the power series") {
  for (double x : {0.3, 1.0, 2.5, 5.0, 11.0}) {
    for (int n : {0, 1, 2, 5, 9}) {
      const double ref = series_oracle(n, x);
      CHECK(std::abs(bessel_i_scaled(n, x) - ref) <= 1e-12 * ref);
    }
  }
  const double i2 = bessel_i_scaled(2, 5.0);
  CHECK(std::abs(i2 - series_oracle(2, 5.0)) < 1e-13 * i2);
}

TEST_CASE("bessel recurrence") {
  const double x = 7.0;
  const int n = 3;
  const double lhs = bessel_i_scaled(n - 1, x) - bessel_i_scaled(n + 1, x);
  const double rhs = 2.0 * n / x * bessel_i_scaled(n, x);
  CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(rhs));
}

TEST_CASE("bessel large-argument asymptotics") {
  const double x = 2000.0;
  for (int n : {0, 1, 4}) {
    const double mu = 4.0 * n * n;
    double term = 1.0, series = 1.0;
    for (int j = 1; j <= 8; ++j) {
      term *= -(mu - (2.0 * j - 1) * (2.0 * j - 1)) / (j * 8.0 * x);
      series += term;
    }
    const double approx = series / std::sqrt(2.0 * std::numbers::pi * x);
    CHECK(std::abs(bessel_i_scaled(n, x) - approx) < 1e-12 * approx);
  }
}

TEST_CASE("bessel table matches single evaluations and sums to one") {
  const double x = 40.0;
  const auto table = bessel_i_scaled_table(200, x);
  double sum = table[0];
  for (int n = 1; n <= 200; ++n) {
    CHECK(table[n] == doctest::Approx(bessel_i_scaled(n, x)).epsilon(1e-12));
    sum += 2.0 * table[n];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("signed bessel parity") {
  CHECK(bessel_i_scaled_signed(3, -2.0) == doctest::Approx(-bessel_i_scaled(3, 2.0)));
  CHECK(bessel_i_scaled_signed(4, -2.0) == doctest::Approx(bessel_i_scaled(4, 2.0)));
}

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(std::abs(sinc(std::numbers::pi)) < 1e-16);
  CHECK(sinc(0.5) == doctest::Approx(std::sin(0.5) / 0.5));
}

TEST_CASE("log binomial") {
  int sign = 0;
  CHECK(std::exp(log_abs_binomial(10, 3, sign)) == doctest::Approx(120.0));
  CHECK(sign == 1);
  // C(2.5, 1.5) = Gamma(3.5) / (Gamma(2.5) Gamma(2)) = 2.5
  CHECK(std::exp(log_abs_binomial(2.5, 1.5, sign)) == doctest::Approx(2.5));
  CHECK(sign == 1);
  log_abs_binomial(4, 6, sign);
  CHECK(sign == 0);
}
