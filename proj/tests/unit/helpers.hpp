#pragma once

#include <random>

#include "rotor/state.hpp"

namespace testing {

/// Random full-rank density matrix. With `margin` > 0 the outermost
/// `margin` momenta on each side are left empty.
inline rotor::DensityMatrix random_state(int truncation, unsigned seed, int margin = 0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  const int inner = truncation - margin;
  const int n = 2 * inner + 1;
  rotor::Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = rotor::cplx(g(rng), g(rng));
  rotor::Matrix rho = a * a.adjoint();
  rho /= rho.trace();
  return rotor::DensityMatrix(inner, rho).padded(truncation);
}

inline rotor::Vector random_pure(int truncation, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  rotor::Vector v(2 * truncation + 1);
  for (auto& x : v) x = rotor::cplx(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace testing
