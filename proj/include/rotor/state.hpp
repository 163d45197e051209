#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rotor {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Auxiliary Wigner index nu stored as n = 2 nu: even n are the integer
/// (pi-periodic) rows, odd n the half-integer (2pi-periodic) rows.
struct HalfIndex {
  int twice_nu = 0;

  static HalfIndex integer(int m) { return {2 * m}; }
  static HalfIndex half_above(int m) { return {2 * m + 1}; }

  double value() const { return 0.5 * twice_nu; }
  bool is_integer() const { return twice_nu % 2 == 0; }
  friend bool operator==(HalfIndex, HalfIndex) = default;
};

/// Rotor state in the angular-momentum basis |m>, m in [-M, M]. Stored
/// Hermitian; the named constructors also normalise to unit trace. The same
/// type carries Hermitian time derivatives, which are traceless instead.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(int truncation, Matrix values);

  static DensityMatrix from_pure(int truncation, const Vector& amplitudes);
  static DensityMatrix momentum_eigenstate(int truncation, int m);
  static DensityMatrix maximally_mixed(int truncation);
  /// Diagonal state from populations indexed by m + M; renormalised.
  static DensityMatrix diagonal(int truncation, const std::vector<double>& populations);

  int truncation() const { return truncation_; }
  int dim() const { return 2 * truncation_ + 1; }
  int index(int m) const { return m + truncation_; }

  cplx operator()(int m1, int m2) const { return values_(index(m1), index(m2)); }
  const Matrix& matrix() const { return values_; }

  double trace() const { return values_.trace().real(); }
  double purity() const;
  double min_eigenvalue() const;
  /// rho_{MM} + rho_{-M,-M}
  double boundary_population() const;
  /// <p> and <p^2> in units where p = hbar m.
  double mean_momentum(double hbar = 1.0) const;
  double mean_momentum_squared(double hbar = 1.0) const;

  /// Embed into a larger basis, zero-padding the new rows and columns.
  DensityMatrix padded(int truncation) const;

 private:
  int truncation_ = 0;
  Matrix values_;
};

/// Fourier coefficients c_{nu,k} of the auxiliary Wigner functions
/// W_nu(alpha) = sum_k c_{nu,k} e^{i k alpha}. Row n = 2 nu holds
/// k = -K_n, -K_n + 2, ..., K_n with K_n = 2M - |n|, which is exactly the set
/// of k with nu +- k/2 integers in [-M, M]. Storage is one flat vector.
class AuxWignerField {
 public:
  AuxWignerField() = default;
  explicit AuxWignerField(int truncation);

  int truncation() const { return truncation_; }
  int row_count() const { return 4 * truncation_ + 1; }
  std::size_t size() const { return coeffs_.size(); }

  /// Largest |k| stored in row n.
  int max_harmonic(int twice_nu) const { return 2 * truncation_ - std::abs(twice_nu); }
  bool contains(int twice_nu, int k) const;
  std::size_t flat_index(int twice_nu, int k) const;

  std::span<cplx> row(int twice_nu);
  std::span<const cplx> row(int twice_nu) const;

  /// Zero when (nu, k) lies outside the truncation or has the wrong parity.
  cplx coeff(HalfIndex nu, int k) const;
  cplx& at(int twice_nu, int k) { return coeffs_[flat_index(twice_nu, k)]; }

  std::vector<cplx>& data() { return coeffs_; }
  const std::vector<cplx>& data() const { return coeffs_; }

  /// W_nu(alpha); the imaginary part vanishes for Hermitian states.
  cplx evaluate(HalfIndex nu, double alpha) const;

  /// sum_m 2 pi c_{m,0}
  double normalization() const;

 private:
  int truncation_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<cplx> coeffs_;
};

/// Periodic Wigner function W(alpha_i, m) on a uniform angle grid and the
/// integer momenta m in [-M, M]. `tail` holds, per angle, the part of
/// sum_m W(alpha, m) carried by integers outside the grid (the slowly
/// decaying sinc weights of the half-integer rows).
struct FullWigner {
  int truncation = 0;
  int n_alpha = 0;
  std::vector<double> values;  // [i * dim + (m + M)]
  std::vector<double> tail;

  int dim() const { return 2 * truncation + 1; }
  double alpha(int i) const;
  double d_alpha() const;
  double at(int i, int m) const { return values[static_cast<std::size_t>(i) * dim() + (m + truncation)]; }

  std::vector<double> momentum_marginal() const;
  std::vector<double> angle_marginal() const;
  double min() const;
  double max() const;
};

struct Marginals {
  std::vector<double> momentum;  // indexed by m + M
  std::vector<double> alpha;
  std::vector<double> angle_density;
};

/// Uniform grid alpha_i = -pi + 2 pi i / n.
std::vector<double> angle_grid(int n_alpha);

/// Momentum amplitudes of the periodic Gaussian wave packet
/// <alpha|psi> ~ exp[-sin^2((alpha - alpha0)/2) / sigma^2], i.e.
/// psi_m = e^{-i m alpha0} I_m(1/2sigma^2) / sqrt(I_0(1/sigma^2)).
/// Throws TruncationError if |psi_{+-M}|^2 > 1e-10.
Vector wavepacket_amplitudes(double sigma, double alpha0, int truncation);
DensityMatrix build_wavepacket(double sigma, double alpha0, int truncation);

/// Angle-space wave function of the same packet, straight from its closed form.
double wavepacket_angle_density(double sigma, double alpha0, double alpha);

/// Normalised pure state from sum_j w_j |psi_j>.
DensityMatrix superpose(const std::vector<Vector>& states, const std::vector<cplx>& weights, int truncation);

AuxWignerField to_aux(const DensityMatrix& rho);
DensityMatrix from_aux(const AuxWignerField& field);

/// Throws AliasingError if n_alpha < 4M + 2.
FullWigner full_wigner(const DensityMatrix& rho, int n_alpha);
FullWigner full_wigner(const AuxWignerField& field, int n_alpha);

Marginals marginals(const AuxWignerField& field, int n_alpha);

/// Reality, normalisation, and positivity checks used by tests and the CLI.
struct StateDiagnostics {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double boundary_population = 0.0;
};
StateDiagnostics diagnose(const DensityMatrix& rho);

}  // namespace rotor
