#include "rotor/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rotor {

double trace_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double trace_norm_hermitian(const Matrix& a) {
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  return 0.5 * trace_norm_hermitian(rho1.matrix() - rho2.matrix());
}

namespace {

// Principal square root; eigenvalues at rounding level are treated as zero so
// that pure states keep an exact rank-one root.
Matrix psd_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
  const Eigen::VectorXd& e = solver.eigenvalues();
  const double cut = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, e.cwiseAbs().maxCoeff());
  Eigen::VectorXd root(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) root(i) = e(i) > cut ? std::sqrt(e(i)) : 0.0;
  return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  // F = (tr|sqrt(rho1) sqrt(rho2)|)^2
  const double root = trace_norm(psd_sqrt(rho1.matrix()) * psd_sqrt(rho2.matrix()));
  return root * root;
}

double long_range_coherence(const DensityMatrix& rho, double min_separation, int n_alpha) {
  const int M = rho.truncation();
  const double two_pi = 2.0 * std::numbers::pi;
  // phi(i, m) = <alpha_i|m> = e^{i m alpha_i}/sqrt(2 pi)
  Matrix phi(n_alpha, rho.dim());
  for (int i = 0; i < n_alpha; ++i) {
    const double alpha = -std::numbers::pi + two_pi * i / n_alpha;
    for (int m = -M; m <= M; ++m) phi(i, m + M) = std::polar(1.0 / std::sqrt(two_pi), m * alpha);
  }
  const Matrix kernel = phi * rho.matrix() * phi.adjoint();
  const double cell = two_pi / n_alpha;
  double sum = 0.0;
  for (int i = 0; i < n_alpha; ++i) {
    for (int j = 0; j < n_alpha; ++j) {
      double d = std::abs(i - j) * cell;
      d = std::min(d, two_pi - d);
      if (d > min_separation) sum += std::norm(kernel(i, j));
    }
  }
  return sum * cell * cell;
}

}  // namespace rotor
