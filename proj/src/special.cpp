#include "rotor/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rotor {
namespace {

constexpr double kSeriesCutoff = 1.0;
constexpr double kRescaleAbove = 1e200;

std::vector<double> series_table(int max_order, double x) {
  std::vector<double> out(max_order + 1, 0.0);
  const double half = 0.5 * x;
  const double quarter_sq = half * half;
  for (int n = 0; n <= max_order; ++n) {
    // Leading term (x/2)^n / n! in log space; underflows cleanly to zero.
    double term = std::exp(n * std::log(half) - std::lgamma(n + 1.0));
    double sum = term;
    for (int k = 0; k < 200; ++k) {
      term *= quarter_sq / ((k + 1.0) * (k + n + 1.0));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    out[n] = sum * std::exp(-x);
  }
  return out;
}

std::vector<double> miller_table(int max_order, double x) {
  const int start = max_order + 32 + static_cast<int>(std::ceil(12.0 * std::sqrt(x)));
  std::vector<double> out(max_order + 1, 0.0);
  double next = 0.0;     // I_{n+1}
  double current = 1.0;  // I_n, arbitrary seed at n = start
  double norm = 0.0;     // I_0 + 2 sum_{n>=1} I_n over the unnormalised sequence
  for (int n = start; n >= 1; --n) {
    if (n <= max_order) out[n] = current;
    norm += 2.0 * current;
    const double previous = next + (2.0 * n / x) * current;
    next = current;
    current = previous;
    if (std::abs(current) > kRescaleAbove) {
      const double s = 1.0 / kRescaleAbove;
      current *= s;
      next *= s;
      norm *= s;
      for (int j = n; j <= max_order; ++j) out[j] *= s;
    }
  }
  out[0] = current;
  norm += current;
  for (double& v : out) v /= norm;
  return out;
}

}  // namespace

std::vector<double> bessel_i_scaled_table(int max_order, double x) {
  if (max_order < 0) throw std::invalid_argument("bessel_i_scaled_table: negative order");
  if (!(x >= 0.0)) throw std::invalid_argument("bessel_i_scaled_table: x must be >= 0");
  if (x == 0.0) {
    std::vector<double> out(max_order + 1, 0.0);
    out[0] = 1.0;
    return out;
  }
  return x <= kSeriesCutoff ? series_table(max_order, x) : miller_table(max_order, x);
}

double bessel_i_scaled(int order, double x) {
  order = std::abs(order);
  return bessel_i_scaled_table(order, x)[order];
}

double bessel_i_scaled_signed(int order, double x) {
  const double v = bessel_i_scaled(order, std::abs(x));
  return (x < 0.0 && (std::abs(order) % 2 == 1)) ? -v : v;
}

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

int gamma_sign(double x) {
  if (x > 0.0) return 1;
  return (static_cast<long long>(std::floor(-x)) % 2 == 0) ? -1 : 1;
}

}  // namespace

double log_abs_binomial(double n, double k, int& sign) {
  if (is_nonpositive_integer(n + 1.0)) throw std::domain_error("log_abs_binomial: pole in Gamma(n+1)");
  if (is_nonpositive_integer(k + 1.0) || is_nonpositive_integer(n - k + 1.0)) {
    sign = 0;
    return -INFINITY;
  }
  sign = gamma_sign(n + 1.0) * gamma_sign(k + 1.0) * gamma_sign(n - k + 1.0);
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace rotor
