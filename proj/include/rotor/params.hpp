#pragma once

#include <vector>

namespace rotor {

/// One Fourier harmonic a_k cos(k alpha) + b_k sin(k alpha) of the potential.
struct Harmonic {
  int k = 1;
  double a = 0.0;
  double b = 0.0;
};

/// A static 2pi-periodic potential given as a finite Fourier series. The
/// constant term is excluded: it only shifts the energy.
class PotentialSpec {
 public:
  PotentialSpec() = default;
  PotentialSpec(std::vector<Harmonic> terms, double v0 = 1.0);

  /// V0 (cos a - cos 2a), the double-well example with a local minimum at 0
  /// and the global minimum at +-pi.
  static PotentialSpec double_well(double v0);

  const std::vector<Harmonic>& terms() const { return terms_; }
  double v0() const { return v0_; }
  bool empty() const { return terms_.empty(); }
  int max_harmonic() const;

  double value(double alpha) const;
  double derivative(double alpha) const;
  double second_derivative(double alpha) const;

  /// max |V''(alpha)| over a dense uniform scan.
  double max_second_derivative() const;
  double max_abs_derivative() const;

  /// Same potential with every coefficient multiplied by `factor`.
  PotentialSpec scaled(double factor) const;

 private:
  std::vector<Harmonic> terms_;
  double v0_ = 1.0;
};

/// Bath and rotor constants. The fluctuation-dissipation relation
/// D = Gamma k_B T I is fixed at construction (k_B = 1).
class BathParams {
 public:
  BathParams() = default;
  BathParams(double temperature, double gamma, double hbar = 1.0, double inertia = 1.0);

  double temperature() const { return temperature_; }
  double gamma() const { return gamma_; }
  double hbar() const { return hbar_; }
  double inertia() const { return inertia_; }
  double diffusion() const { return gamma_ * temperature_ * inertia_; }

  /// hbar^2 / (T I)
  double epsilon1() const;
  /// hbar^2 max|V''| / (T^2 I)
  double epsilon2(const PotentialSpec& potential) const;

  BathParams with_temperature(double temperature) const;

 private:
  double temperature_ = 1.0;
  double gamma_ = 0.0;
  double hbar_ = 1.0;
  double inertia_ = 1.0;
};

/// Conversion between the scaled variables (t~ = t sqrt(V0/I), T~ = T/V0,
/// hbar~ = hbar/sqrt(V0 I), Gamma~ = Gamma sqrt(I/V0)) and the internal
/// unit system hbar = I = k_B = 1, in which V0 = 1/hbar~^2.
class Scaling {
 public:
  explicit Scaling(double hbar_tilde);

  double hbar_tilde() const { return hbar_tilde_; }
  double v0() const { return 1.0 / (hbar_tilde_ * hbar_tilde_); }

  double time(double t_tilde) const { return t_tilde * hbar_tilde_; }
  double time_tilde(double t) const { return t / hbar_tilde_; }
  double temperature(double temperature_tilde) const { return temperature_tilde * v0(); }
  double rate(double gamma_tilde) const { return gamma_tilde / hbar_tilde_; }
  double momentum_tilde(double p) const { return p * hbar_tilde_; }

  /// Bath in internal units from scaled temperature and friction rate.
  BathParams bath(double temperature_tilde, double gamma_tilde) const;
  /// Potential with coefficients given in units of V0.
  PotentialSpec potential(const std::vector<Harmonic>& terms_in_v0) const;

 private:
  double hbar_tilde_;
};

/// Revival time 4 pi I / hbar of the free rotor.
double revival_time(double hbar = 1.0, double inertia = 1.0);

}  // namespace rotor
