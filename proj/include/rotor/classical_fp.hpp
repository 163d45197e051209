#pragma once

#include <vector>

#include "rotor/params.hpp"
#include "rotor/state.hpp"

namespace rotor {

/// Uniform angles alpha_i = -pi + 2 pi i / n_alpha and cell-centred momenta
/// p_j = -p_max + (j + 1/2) dp.
struct ClassicalGrid {
  int n_alpha = 64;
  int n_p = 256;
  double p_max = 1.0;

  double alpha(int i) const;
  double p(int j) const;
  double d_alpha() const;
  double dp() const;
  /// p_max = 6 sqrt(T I)
  static ClassicalGrid thermal(int n_alpha, int n_p, double temperature, double inertia);
};

/// Phase-space density W(alpha_i, p_j), stored [j * n_alpha + i].
struct ClassicalField {
  ClassicalGrid grid;
  std::vector<double> values;

  explicit ClassicalField(ClassicalGrid g = {});

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.n_alpha + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.n_alpha + i]; }

  double mass() const;
  double mean_p() const;
  double mean_p2() const;
  double min() const;
  double l1_norm() const;
  /// Largest density in the outermost momentum cells.
  double boundary_density() const;
};

struct FpParams {
  PotentialSpec potential;
  double gamma = 0.0;
  double diffusion = 0.0;
  double inertia = 1.0;

  static FpParams thermal(const PotentialSpec& potential, const BathParams& bath);
};

/// dW/dt = -(p/I) dW/dalpha + d/dp[(V' + Gamma p) W + D dW/dp]: spectral in
/// alpha, conservative second-order fluxes in p with zero flux at +-p_max.
std::vector<double> fp_rhs(const ClassicalField& field, const FpParams& params);

/// Largest step allowed by the advection and diffusion limits, times 0.5.
double fp_max_step(const ClassicalGrid& grid, const FpParams& params);

/// One RK4 step; throws std::invalid_argument above fp_max_step.
ClassicalField fp_step(const ClassicalField& field, const FpParams& params, double dt);

/// Steps up to time t, shortening the last step to land on it.
ClassicalField fp_evolve(ClassicalField field, const FpParams& params, double t, double dt);

/// W ~ exp(-(p^2/2I + V)/T), normalised on the grid.
ClassicalField classical_gibbs(const ClassicalGrid& grid, const PotentialSpec& potential, double temperature,
                               double inertia);

/// Classical counterpart of the periodic Gaussian packet: its angle density
/// times a Gaussian of width hbar / 2 sigma in p.
ClassicalField classical_wavepacket(const ClassicalGrid& grid, double sigma, double alpha0, double hbar);

/// ||dW/dt||_1 / ||W||_1
double stationarity_residual(const ClassicalField& field, const FpParams& params);

struct QuantumClassicalComparison {
  /// sum over (alpha_i, m) cells of |P_quantum - P_classical|; momentum cells
  /// are [hbar (m - 1/2), hbar (m + 1/2)].
  double l1_distance = 0.0;
  double half_integer_weight = 0.0;
  double classical_mass_outside = 0.0;
};

/// L1 norm of the non-local part of the half-integer resummation,
/// sum_m' sinc[(m - m' - 1/2) pi] W_{m'+1/2} - (W_{m-1/2} + W_{m+1/2})/2,
/// relative to the L1 norm of W. It vanishes for states that are smooth on
/// the momentum lattice, i.e. in the classical limit.
double half_integer_weight(const DensityMatrix& rho, int n_alpha);

/// The quantum Wigner function is evaluated on the classical angle grid,
/// which therefore needs n_alpha >= 4M + 2.
QuantumClassicalComparison quantum_classical_compare(const DensityMatrix& rho, double hbar,
                                                     const ClassicalField& classical);

}  // namespace rotor
