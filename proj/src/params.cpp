#include "rotor/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rotor {

PotentialSpec::PotentialSpec(std::vector<Harmonic> terms, double v0) : terms_(std::move(terms)), v0_(v0) {
  for (const auto& h : terms_) {
    if (h.k < 1) throw std::invalid_argument("PotentialSpec: harmonics must have k >= 1");
  }
  if (!(v0_ > 0.0)) throw std::invalid_argument("PotentialSpec: V0 must be positive");
}

PotentialSpec PotentialSpec::double_well(double v0) {
  return PotentialSpec({{1, v0, 0.0}, {2, -v0, 0.0}}, v0);
}

int PotentialSpec::max_harmonic() const {
  int k = 0;
  for (const auto& h : terms_) k = std::max(k, h.k);
  return k;
}

double PotentialSpec::value(double alpha) const {
  double v = 0.0;
  for (const auto& h : terms_) v += h.a * std::cos(h.k * alpha) + h.b * std::sin(h.k * alpha);
  return v;
}

double PotentialSpec::derivative(double alpha) const {
  double v = 0.0;
  for (const auto& h : terms_) v += h.k * (-h.a * std::sin(h.k * alpha) + h.b * std::cos(h.k * alpha));
  return v;
}

double PotentialSpec::second_derivative(double alpha) const {
  double v = 0.0;
  for (const auto& h : terms_) {
    const double k2 = static_cast<double>(h.k) * h.k;
    v += k2 * (-h.a * std::cos(h.k * alpha) - h.b * std::sin(h.k * alpha));
  }
  return v;
}

namespace {

template <class F>
double dense_max_abs(const F& f, int max_k) {
  const int n = std::max(4096, 256 * max_k);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double alpha = -std::numbers::pi + 2.0 * std::numbers::pi * i / n;
    best = std::max(best, std::abs(f(alpha)));
  }
  return best;
}

}  // namespace

double PotentialSpec::max_second_derivative() const {
  if (terms_.empty()) return 0.0;
  return dense_max_abs([this](double a) { return second_derivative(a); }, max_harmonic());
}

double PotentialSpec::max_abs_derivative() const {
  if (terms_.empty()) return 0.0;
  return dense_max_abs([this](double a) { return derivative(a); }, max_harmonic());
}

PotentialSpec PotentialSpec::scaled(double factor) const {
  auto terms = terms_;
  for (auto& h : terms) {
    h.a *= factor;
    h.b *= factor;
  }
  return PotentialSpec(std::move(terms), v0_ * std::abs(factor));
}

BathParams::BathParams(double temperature, double gamma, double hbar, double inertia)
    : temperature_(temperature), gamma_(gamma), hbar_(hbar), inertia_(inertia) {
  if (!(temperature_ > 0.0)) throw std::invalid_argument("BathParams: temperature must be positive");
  if (!(gamma_ >= 0.0)) throw std::invalid_argument("BathParams: friction rate must be >= 0");
  if (!(hbar_ > 0.0) || !(inertia_ > 0.0)) throw std::invalid_argument("BathParams: hbar and I must be positive");
}

double BathParams::epsilon1() const { return hbar_ * hbar_ / (temperature_ * inertia_); }

double BathParams::epsilon2(const PotentialSpec& potential) const {
  return hbar_ * hbar_ * potential.max_second_derivative() / (temperature_ * temperature_ * inertia_);
}

BathParams BathParams::with_temperature(double temperature) const {
  return BathParams(temperature, gamma_, hbar_, inertia_);
}

Scaling::Scaling(double hbar_tilde) : hbar_tilde_(hbar_tilde) {
  if (!(hbar_tilde_ > 0.0)) throw std::invalid_argument("Scaling: hbar~ must be positive");
}

BathParams Scaling::bath(double temperature_tilde, double gamma_tilde) const {
  return BathParams(temperature(temperature_tilde), rate(gamma_tilde));
}

PotentialSpec Scaling::potential(const std::vector<Harmonic>& terms_in_v0) const {
  if (terms_in_v0.empty()) return PotentialSpec({}, v0());
  return PotentialSpec(terms_in_v0, 1.0).scaled(v0());
}

double revival_time(double hbar, double inertia) { return 4.0 * std::numbers::pi * inertia / hbar; }

}  // namespace rotor
