#pragma once

#include <vector>

#include "rotor/liouvillian.hpp"
#include "rotor/params.hpp"
#include "rotor/state.hpp"

namespace rotor {

/// Exact free evolution: c_{nu,k} -> c_{nu,k} e^{-i k nu hbar t / I}.
AuxWignerField free_shear(const AuxWignerField& field, double t, double hbar = 1.0, double inertia = 1.0);

/// Phase convention of the frictionless-diffusion kernel.
///  derived:    kappa = e^{-2Dt/hbar^2} e^{+i l k hbar t/2I} I_l(x_k)
///  as_printed: kappa = e^{-2Dt/hbar}   e^{-i l k hbar t/2I} I_l(x_k)
/// with x_k = (2Dt/hbar^2) sinc(hbar k t / 2I). The two coincide for
/// hbar = 1 at k = 0 only.
enum class KernelConvention { derived, as_printed };

/// Kernels K_l(alpha', t) = (1/2pi) sum_k kappa_{l,k} e^{i k alpha'} for
/// |l| <= L and |k| <= K.
struct KernelTable {
  double t = 0.0;
  double diffusion = 0.0;
  double hbar = 1.0;
  double inertia = 1.0;
  int winding_cutoff = 0;  // L
  int max_harmonic = 0;    // K
  std::vector<cplx> coefficients;  // [(l + L) * (2K + 1) + (k + K)]
  std::vector<double> alpha;
  std::vector<double> values;  // [(l + L) * alpha.size() + i]
  double max_imaginary = 0.0;  // largest |Im K_l| met while sampling

  cplx coefficient(int l, int k) const;
  /// sum_l int K_l from the k = 0 coefficients.
  double normalization() const;
  /// Same integral by quadrature of the sampled rows.
  double normalization_quadrature() const;
};

/// Smallest L with e^{-x} I_L(x) < threshold at x = 2Dt/hbar^2.
int winding_cutoff(double t, double diffusion, double hbar, double threshold = 1e-12, int max_cutoff = 100000);

KernelTable diffusion_kernel(double t, double diffusion, int max_harmonic, int n_alpha, double hbar = 1.0,
                             double inertia = 1.0, KernelConvention convention = KernelConvention::derived);

/// Shear plus winding convolution, done on the Fourier coefficients:
/// c_{nu,k}(t) = e^{-i k nu hbar t/I} sum_l kappa_{l,k} c_{nu-l,k}(0).
AuxWignerField apply_diffusion_solution(const AuxWignerField& initial, double t, double diffusion,
                                        double hbar = 1.0, double inertia = 1.0,
                                        KernelConvention convention = KernelConvention::derived);

struct FreeEquilibrium {
  DensityMatrix state;
  /// sum_m 8^{-a} C(4a, 2a + m) over the basis before renormalisation
  double raw_sum = 0.0;
  double a = 0.0;  // T I / hbar^2
  int clipped = 0;  // negative generalised binomials set to zero
};

/// Approximate free-rotor equilibrium: populations 8^{-a} C(4a, 2a + m),
/// a = T I / hbar^2, renormalised to unit trace.
FreeEquilibrium free_equilibrium(double temperature, double hbar, double inertia, int truncation);

/// Exact V = 0 steady state of the full generator: the diagonal is a
/// birth-death chain whose detailed balance gives p_m ~ C(8a, 4a + m)^2.
DensityMatrix free_equilibrium_exact(double temperature, double hbar, double inertia, int truncation);

struct GibbsResidual {
  double residual = 0.0;  // ||L rho_G||_tr with L the full dissipator
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  /// ||(hbar^2 Gamma / T^2 I) V'' rho_G||_tr
  double predicted_leading = 0.0;
  /// ||L (rho_G(V) - rho_G(0))||_tr, the part of the residual the potential adds
  double potential_part = 0.0;
};

GibbsResidual gibbs_residual(const PotentialSpec& potential, const BathParams& bath, int truncation);

}  // namespace rotor
