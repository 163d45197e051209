#include "rotor/operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rotor/errors.hpp"

namespace rotor {

ShiftOperators::ShiftOperators(int truncation_, double hbar) : truncation(truncation_) {
  const int n = 2 * truncation + 1;
  l_plus.resize(n, n);
  l_minus.resize(n, n);
  momentum.resize(n, n);
  std::vector<Eigen::Triplet<cplx>> up, down, p;
  for (int i = 0; i + 1 < n; ++i) {
    up.emplace_back(i + 1, i, 1.0);
    down.emplace_back(i, i + 1, 1.0);
  }
  for (int i = 0; i < n; ++i) p.emplace_back(i, i, hbar * (i - truncation));
  l_plus.setFromTriplets(up.begin(), up.end());
  l_minus.setFromTriplets(down.begin(), down.end());
  momentum.setFromTriplets(p.begin(), p.end());
}

SparseMatrix ShiftOperators::shift(int k) const {
  const int n = 2 * truncation + 1;
  SparseMatrix out(n, n);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int i = 0; i < n; ++i) {
    const int j = i + k;
    if (j >= 0 && j < n) t.emplace_back(j, i, 1.0);
  }
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix ShiftOperators::cos_k(int k) const { return 0.5 * (shift(k) + shift(-k)); }

SparseMatrix ShiftOperators::sin_k(int k) const { return cplx(0.0, -0.5) * (shift(k) - shift(-k)); }

SparseMatrix potential_matrix(const PotentialSpec& potential, int truncation) {
  const ShiftOperators ops(truncation);
  const int n = 2 * truncation + 1;
  SparseMatrix v(n, n);
  for (const auto& h : potential.terms()) v += h.a * ops.cos_k(h.k) + h.b * ops.sin_k(h.k);
  return v;
}

SparseMatrix potential_curvature_matrix(const PotentialSpec& potential, int truncation) {
  const ShiftOperators ops(truncation);
  const int n = 2 * truncation + 1;
  SparseMatrix v(n, n);
  for (const auto& h : potential.terms()) {
    const double k2 = static_cast<double>(h.k) * h.k;
    v += -k2 * (h.a * ops.cos_k(h.k) + h.b * ops.sin_k(h.k));
  }
  return v;
}

Matrix hamiltonian(const PotentialSpec& potential, const BathParams& bath, int truncation) {
  Matrix h = Matrix(potential_matrix(potential, truncation));
  const double scale = bath.hbar() * bath.hbar() / (2.0 * bath.inertia());
  for (int m = -truncation; m <= truncation; ++m) h(m + truncation, m + truncation) += scale * m * m;
  return h;
}

DensityMatrix gibbs_state(const PotentialSpec& potential, const BathParams& bath, int truncation,
                          double boundary_tolerance) {
  const Matrix h = hamiltonian(potential, bath, truncation);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Eigen::VectorXd& e = solver.eigenvalues();
  const double e0 = e.minCoeff();
  Eigen::VectorXd weights = (-(e.array() - e0) / bath.temperature()).exp();
  weights /= weights.sum();
  const Matrix& u = solver.eigenvectors();
  DensityMatrix rho(truncation, u * weights.asDiagonal() * u.adjoint());
  const double edge = rho.boundary_population();
  if (edge > boundary_tolerance) {
    throw TruncationError("Gibbs state at T=" + std::to_string(bath.temperature()) + " needs M > " +
                          std::to_string(truncation) + " (boundary population " + std::to_string(edge) + ")");
  }
  return rho;
}

int gibbs_truncation(const PotentialSpec& potential, const BathParams& bath, double boundary_tolerance, int minimum,
                     int maximum) {
  for (int m = minimum; m <= maximum; m += 4) {
    try {
      gibbs_state(potential, bath, m, boundary_tolerance);
      return m;
    } catch (const TruncationError&) {
    }
  }
  throw TruncationError("gibbs_truncation: no M <= " + std::to_string(maximum) + " is large enough");
}

double energy(const DensityMatrix& rho, const Matrix& hamiltonian) {
  return (hamiltonian * rho.matrix()).trace().real();
}

}  // namespace rotor
