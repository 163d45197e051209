#include "rotor/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rotor/errors.hpp"
#include "rotor/special.hpp"

namespace rotor {

using std::numbers::pi;

DensityMatrix::DensityMatrix(int truncation, Matrix values) : truncation_(truncation), values_(std::move(values)) {
  if (truncation_ < 0) throw std::invalid_argument("DensityMatrix: negative truncation");
  if (values_.rows() != dim() || values_.cols() != dim()) {
    throw std::invalid_argument("DensityMatrix: expected a " + std::to_string(dim()) + "x" + std::to_string(dim()) +
                                " matrix");
  }
  Matrix adjoint = values_.adjoint();
  values_ = 0.5 * (values_ + adjoint);
}

DensityMatrix DensityMatrix::from_pure(int truncation, const Vector& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("DensityMatrix::from_pure: zero-norm state");
  const Vector psi = amplitudes / norm;
  return DensityMatrix(truncation, psi * psi.adjoint());
}

DensityMatrix DensityMatrix::momentum_eigenstate(int truncation, int m) {
  if (std::abs(m) > truncation) throw TruncationError("momentum eigenstate outside the truncated basis");
  Matrix values = Matrix::Zero(2 * truncation + 1, 2 * truncation + 1);
  values(m + truncation, m + truncation) = 1.0;
  return DensityMatrix(truncation, std::move(values));
}

DensityMatrix DensityMatrix::maximally_mixed(int truncation) {
  const int n = 2 * truncation + 1;
  return DensityMatrix(truncation, Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix DensityMatrix::diagonal(int truncation, const std::vector<double>& populations) {
  const int n = 2 * truncation + 1;
  if (static_cast<int>(populations.size()) != n) throw std::invalid_argument("DensityMatrix::diagonal: size mismatch");
  double total = 0.0;
  for (double p : populations) total += p;
  if (!(total > 0.0)) throw std::invalid_argument("DensityMatrix::diagonal: populations sum to zero");
  Matrix values = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) values(i, i) = populations[i] / total;
  return DensityMatrix(truncation, std::move(values));
}

double DensityMatrix::purity() const { return (values_ * values_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(values_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::boundary_population() const {
  if (truncation_ == 0) return values_(0, 0).real();
  return values_(0, 0).real() + values_(dim() - 1, dim() - 1).real();
}

double DensityMatrix::mean_momentum(double hbar) const {
  double s = 0.0;
  for (int m = -truncation_; m <= truncation_; ++m) s += m * values_(index(m), index(m)).real();
  return hbar * s;
}

double DensityMatrix::mean_momentum_squared(double hbar) const {
  double s = 0.0;
  for (int m = -truncation_; m <= truncation_; ++m) s += double(m) * m * values_(index(m), index(m)).real();
  return hbar * hbar * s;
}

DensityMatrix DensityMatrix::padded(int truncation) const {
  if (truncation < truncation_) throw std::invalid_argument("DensityMatrix::padded: cannot shrink");
  const int n = 2 * truncation + 1;
  Matrix values = Matrix::Zero(n, n);
  const int shift = truncation - truncation_;
  values.block(shift, shift, dim(), dim()) = values_;
  return DensityMatrix(truncation, std::move(values));
}

// ---------------------------------------------------------------------------

AuxWignerField::AuxWignerField(int truncation) : truncation_(truncation) {
  if (truncation_ < 0) throw std::invalid_argument("AuxWignerField: negative truncation");
  offsets_.resize(row_count() + 1);
  std::size_t offset = 0;
  for (int r = 0; r < row_count(); ++r) {
    offsets_[r] = offset;
    offset += static_cast<std::size_t>(max_harmonic(r - 2 * truncation_) + 1);
  }
  offsets_[row_count()] = offset;
  coeffs_.assign(offset, cplx{});
}

bool AuxWignerField::contains(int twice_nu, int k) const {
  const int kmax = max_harmonic(twice_nu);
  return kmax >= 0 && std::abs(k) <= kmax && ((k + twice_nu) % 2 == 0);
}

std::size_t AuxWignerField::flat_index(int twice_nu, int k) const {
  const int kmax = max_harmonic(twice_nu);
  return offsets_[twice_nu + 2 * truncation_] + static_cast<std::size_t>((k + kmax) / 2);
}

std::span<cplx> AuxWignerField::row(int twice_nu) {
  const int r = twice_nu + 2 * truncation_;
  return {coeffs_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
}

std::span<const cplx> AuxWignerField::row(int twice_nu) const {
  const int r = twice_nu + 2 * truncation_;
  return {coeffs_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
}

cplx AuxWignerField::coeff(HalfIndex nu, int k) const {
  if (!contains(nu.twice_nu, k)) return {};
  return coeffs_[flat_index(nu.twice_nu, k)];
}

cplx AuxWignerField::evaluate(HalfIndex nu, double alpha) const {
  const int kmax = max_harmonic(nu.twice_nu);
  if (kmax < 0) return {};
  const auto r = row(nu.twice_nu);
  const cplx step = std::polar(1.0, 2.0 * alpha);
  cplx phase = std::polar(1.0, -kmax * alpha);
  cplx sum{};
  for (const cplx& c : r) {
    sum += c * phase;
    phase *= step;
  }
  return sum;
}

double AuxWignerField::normalization() const {
  double s = 0.0;
  for (int m = -truncation_; m <= truncation_; ++m) s += coeff(HalfIndex::integer(m), 0).real();
  return 2.0 * pi * s;
}

// ---------------------------------------------------------------------------

std::vector<double> angle_grid(int n_alpha) {
  std::vector<double> grid(n_alpha);
  for (int i = 0; i < n_alpha; ++i) grid[i] = -pi + 2.0 * pi * i / n_alpha;
  return grid;
}

double FullWigner::alpha(int i) const { return -pi + 2.0 * pi * i / n_alpha; }
double FullWigner::d_alpha() const { return 2.0 * pi / n_alpha; }

std::vector<double> FullWigner::momentum_marginal() const {
  std::vector<double> out(dim(), 0.0);
  for (int i = 0; i < n_alpha; ++i) {
    for (int j = 0; j < dim(); ++j) out[j] += values[static_cast<std::size_t>(i) * dim() + j];
  }
  for (double& v : out) v *= d_alpha();
  return out;
}

std::vector<double> FullWigner::angle_marginal() const {
  std::vector<double> out(n_alpha, 0.0);
  for (int i = 0; i < n_alpha; ++i) {
    double s = tail[i];
    for (int j = 0; j < dim(); ++j) s += values[static_cast<std::size_t>(i) * dim() + j];
    out[i] = s;
  }
  return out;
}

double FullWigner::min() const { return *std::min_element(values.begin(), values.end()); }
double FullWigner::max() const { return *std::max_element(values.begin(), values.end()); }

// ---------------------------------------------------------------------------

Vector wavepacket_amplitudes(double sigma, double alpha0, int truncation) {
  if (!(sigma > 0.0)) throw std::invalid_argument("build_wavepacket: sigma must be positive");
  const double z = 0.5 / (sigma * sigma);
  const auto bessel = bessel_i_scaled_table(truncation, z);
  const double norm = std::sqrt(bessel_i_scaled(0, 2.0 * z));
  Vector psi(2 * truncation + 1);
  for (int m = -truncation; m <= truncation; ++m) {
    psi(m + truncation) = std::polar(bessel[std::abs(m)] / norm, -m * alpha0);
  }
  const double edge = std::norm(psi(0));
  if (edge > 1e-10) {
    throw TruncationError("wave packet sigma=" + std::to_string(sigma) + " needs a larger truncation than M=" +
                          std::to_string(truncation) + " (boundary weight " + std::to_string(edge) + ")");
  }
  return psi / psi.norm();
}

DensityMatrix build_wavepacket(double sigma, double alpha0, int truncation) {
  return DensityMatrix::from_pure(truncation, wavepacket_amplitudes(sigma, alpha0, truncation));
}

double wavepacket_angle_density(double sigma, double alpha0, double alpha) {
  const double s = std::sin(0.5 * (alpha - alpha0));
  const double inv = 1.0 / (sigma * sigma);
  return std::exp(-2.0 * s * s * inv) / (2.0 * pi * bessel_i_scaled(0, inv));
}

DensityMatrix superpose(const std::vector<Vector>& states, const std::vector<cplx>& weights, int truncation) {
  if (states.empty() || states.size() != weights.size()) {
    throw std::invalid_argument("superpose: need one weight per state");
  }
  Vector sum = Vector::Zero(2 * truncation + 1);
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (states[j].size() != sum.size()) throw std::invalid_argument("superpose: dimension mismatch");
    sum += weights[j] * states[j];
  }
  if (sum.norm() < 1e-14) throw std::invalid_argument("superpose: zero-norm superposition");
  return DensityMatrix::from_pure(truncation, sum);
}

AuxWignerField to_aux(const DensityMatrix& rho) {
  const int M = rho.truncation();
  AuxWignerField field(M);
  const double scale = 1.0 / (2.0 * pi);
  for (int m1 = -M; m1 <= M; ++m1) {
    for (int m2 = -M; m2 <= M; ++m2) field.at(m1 + m2, m1 - m2) = scale * rho(m1, m2);
  }
  return field;
}

DensityMatrix from_aux(const AuxWignerField& field) {
  const int M = field.truncation();
  Matrix values(2 * M + 1, 2 * M + 1);
  for (int n = -2 * M; n <= 2 * M; ++n) {
    const int kmax = field.max_harmonic(n);
    const auto r = field.row(n);
    for (int j = 0; j <= kmax; ++j) {
      const int k = -kmax + 2 * j;
      values((n + k) / 2 + M, (n - k) / 2 + M) = 2.0 * pi * r[j];
    }
  }
  return DensityMatrix(M, std::move(values));
}

namespace {

// Real part of every row W_n(alpha_i), laid out [row][i].
std::vector<double> evaluate_rows(const AuxWignerField& field, int n_alpha) {
  const int M = field.truncation();
  const auto grid = angle_grid(n_alpha);
  std::vector<double> out(static_cast<std::size_t>(field.row_count()) * n_alpha);
  for (int n = -2 * M; n <= 2 * M; ++n) {
    double* dst = out.data() + static_cast<std::size_t>(n + 2 * M) * n_alpha;
    for (int i = 0; i < n_alpha; ++i) dst[i] = field.evaluate({n}, grid[i]).real();
  }
  return out;
}

}  // namespace

FullWigner full_wigner(const AuxWignerField& field, int n_alpha) {
  const int M = field.truncation();
  if (n_alpha < 4 * M + 2) {
    throw AliasingError("full_wigner: n_alpha=" + std::to_string(n_alpha) + " cannot resolve harmonics up to 2M=" +
                        std::to_string(2 * M));
  }
  const auto rows = evaluate_rows(field, n_alpha);
  auto row_at = [&](int n) { return rows.data() + static_cast<std::size_t>(n + 2 * M) * n_alpha; };

  FullWigner w;
  w.truncation = M;
  w.n_alpha = n_alpha;
  w.values.assign(static_cast<std::size_t>(n_alpha) * w.dim(), 0.0);
  w.tail.assign(n_alpha, 0.0);

  // sinc[(j - 1/2) pi] for j = m - m' spanning the grid.
  std::vector<double> weight(4 * M + 2);
  for (int j = -2 * M; j <= 2 * M + 1; ++j) weight[j + 2 * M] = sinc((j - 0.5) * pi);

  for (int m = -M; m <= M; ++m) {
    const double* integer_row = row_at(2 * m);
    for (int i = 0; i < n_alpha; ++i) w.values[static_cast<std::size_t>(i) * w.dim() + (m + M)] += integer_row[i];
  }
  for (int mp = -M; mp < M; ++mp) {
    const double* half_row = row_at(2 * mp + 1);
    double on_grid = 0.0;
    for (int m = -M; m <= M; ++m) {
      const double s = weight[m - mp + 2 * M];
      on_grid += s;
      for (int i = 0; i < n_alpha; ++i) w.values[static_cast<std::size_t>(i) * w.dim() + (m + M)] += s * half_row[i];
    }
    // sum over all integers of sinc[(j - 1/2) pi] is exactly 1
    const double outside = 1.0 - on_grid;
    for (int i = 0; i < n_alpha; ++i) w.tail[i] += outside * half_row[i];
  }
  return w;
}

FullWigner full_wigner(const DensityMatrix& rho, int n_alpha) { return full_wigner(to_aux(rho), n_alpha); }

Marginals marginals(const AuxWignerField& field, int n_alpha) {
  const int M = field.truncation();
  Marginals out;
  out.momentum.resize(2 * M + 1);
  for (int m = -M; m <= M; ++m) out.momentum[m + M] = 2.0 * pi * field.coeff(HalfIndex::integer(m), 0).real();
  out.alpha = angle_grid(n_alpha);
  out.angle_density.assign(n_alpha, 0.0);
  const auto rows = evaluate_rows(field, n_alpha);
  for (int r = 0; r < field.row_count(); ++r) {
    for (int i = 0; i < n_alpha; ++i) out.angle_density[i] += rows[static_cast<std::size_t>(r) * n_alpha + i];
  }
  return out;
}

StateDiagnostics diagnose(const DensityMatrix& rho) {
  StateDiagnostics d;
  d.trace_error = std::abs(rho.matrix().trace() - cplx(1.0));
  d.hermiticity_error = (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff();
  d.min_eigenvalue = rho.min_eigenvalue();
  d.boundary_population = rho.boundary_population();
  return d;
}

}  // namespace rotor
