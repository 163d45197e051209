#pragma once

#include "rotor/state.hpp"

namespace rotor {

/// Sum of singular values.
double trace_norm(const Matrix& a);
/// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm_hermitian(const Matrix& a);

/// d1 = (1/2) tr|rho1 - rho2|
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Uhlmann fidelity (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Hilbert-Schmidt weight of <alpha|rho|alpha'> at angular separations
/// larger than `min_separation`, i.e. the long-range coherence between
/// distinct orientations. Evaluated on an n_alpha x n_alpha grid.
double long_range_coherence(const DensityMatrix& rho, double min_separation, int n_alpha);

}  // namespace rotor
