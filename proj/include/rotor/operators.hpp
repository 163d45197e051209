#pragma once

#include <Eigen/Sparse>

#include "rotor/params.hpp"
#include "rotor/state.hpp"

namespace rotor {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Unit shift operators e^{+-i alpha} and the momentum operator on the
/// truncated basis. L_plus |m> = |m+1> inside the truncation; the image of
/// |M> is dropped.
struct ShiftOperators {
  int truncation = 0;
  SparseMatrix l_plus;
  SparseMatrix l_minus;
  SparseMatrix momentum;  // hbar diag(m)

  explicit ShiftOperators(int truncation, double hbar = 1.0);

  /// cos(k alpha) = (L+^k + L-^k)/2 and sin(k alpha) = (L+^k - L-^k)/2i
  SparseMatrix cos_k(int k) const;
  SparseMatrix sin_k(int k) const;
  SparseMatrix shift(int k) const;  // L+^k for k >= 0, L-^{|k|} otherwise
};

/// V(alpha) as a banded Hermitian matrix.
SparseMatrix potential_matrix(const PotentialSpec& potential, int truncation);
/// V''(alpha) as a banded Hermitian matrix.
SparseMatrix potential_curvature_matrix(const PotentialSpec& potential, int truncation);

/// H = hbar^2 m^2 / 2I + V
Matrix hamiltonian(const PotentialSpec& potential, const BathParams& bath, int truncation);

/// exp(-H/T)/Z via Hermitian eigendecomposition. Throws TruncationError if
/// the population on |m| = M exceeds `boundary_tolerance`.
DensityMatrix gibbs_state(const PotentialSpec& potential, const BathParams& bath, int truncation,
                          double boundary_tolerance = 1e-10);

/// Smallest truncation whose Gibbs state keeps the boundary population
/// below `boundary_tolerance`.
int gibbs_truncation(const PotentialSpec& potential, const BathParams& bath, double boundary_tolerance,
                     int minimum = 8, int maximum = 512);

double energy(const DensityMatrix& rho, const Matrix& hamiltonian);

}  // namespace rotor
