#include "rotor/oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rotor/errors.hpp"
#include "rotor/metrics.hpp"
#include "rotor/operators.hpp"
#include "rotor/special.hpp"

namespace rotor {

using std::numbers::pi;

AuxWignerField free_shear(const AuxWignerField& field, double t, double hbar, double inertia) {
  AuxWignerField out = field;
  const int M = field.truncation();
  const double w = hbar * t / inertia;
  for (int n = -2 * M; n <= 2 * M; ++n) {
    const int kmax = field.max_harmonic(n);
    auto row = out.row(n);
    for (int j = 0; j <= kmax; ++j) {
      const int k = -kmax + 2 * j;
      row[j] *= std::polar(1.0, -0.5 * k * n * w);
    }
  }
  return out;
}

int winding_cutoff(double t, double diffusion, double hbar, double threshold, int max_cutoff) {
  const double x = 2.0 * diffusion * t / (hbar * hbar);
  if (x == 0.0) return 0;
  const int probe = std::min(max_cutoff, 64 + static_cast<int>(std::ceil(10.0 * std::sqrt(x) + x / 4.0)));
  auto table = bessel_i_scaled_table(probe, x);
  for (int l = 0; l <= probe; ++l) {
    if (table[l] < threshold) return l;
  }
  throw TruncationError("winding cutoff exceeds " + std::to_string(probe) + " at 2Dt/hbar^2=" + std::to_string(x));
}

namespace {

// kappa_{l,k} for every |l| <= L at fixed k.
std::vector<cplx> kernel_column(int L, int k, double t, double diffusion, double hbar, double inertia,
                                KernelConvention convention) {
  const double s = 2.0 * diffusion * t / (hbar * hbar);
  const double phi = hbar * k * t / (2.0 * inertia);
  const double x = s * sinc(phi);
  const double ax = std::abs(x);
  // e^{-|x|} I_l(|x|) times the remaining exponential
  const auto table = bessel_i_scaled_table(L, ax);
  const double decay = convention == KernelConvention::derived ? -s : -2.0 * diffusion * t / hbar;
  const double pref = std::exp(decay + ax);
  const double sign = convention == KernelConvention::derived ? 1.0 : -1.0;
  std::vector<cplx> col(2 * L + 1);
  for (int l = -L; l <= L; ++l) {
    double v = pref * table[std::abs(l)];
    if (x < 0.0 && (std::abs(l) % 2 == 1)) v = -v;
    col[l + L] = std::polar(v, sign * l * phi);
  }
  return col;
}

}  // namespace

cplx KernelTable::coefficient(int l, int k) const {
  if (std::abs(l) > winding_cutoff || std::abs(k) > max_harmonic) return {};
  return coefficients[static_cast<std::size_t>(l + winding_cutoff) * (2 * max_harmonic + 1) + (k + max_harmonic)];
}

double KernelTable::normalization() const {
  double s = 0.0;
  for (int l = -winding_cutoff; l <= winding_cutoff; ++l) s += coefficient(l, 0).real();
  return s;
}

double KernelTable::normalization_quadrature() const {
  const double d = 2.0 * pi / alpha.size();
  double s = 0.0;
  for (double v : values) s += v;
  return s * d;
}

KernelTable diffusion_kernel(double t, double diffusion, int max_harmonic, int n_alpha, double hbar, double inertia,
                             KernelConvention convention) {
  if (t < 0.0) throw std::invalid_argument("diffusion_kernel: negative time");
  if (n_alpha < 2 * max_harmonic + 1) throw AliasingError("diffusion_kernel: grid too coarse for the harmonics");
  KernelTable table;
  table.t = t;
  table.diffusion = diffusion;
  table.hbar = hbar;
  table.inertia = inertia;
  table.max_harmonic = max_harmonic;
  const int L = winding_cutoff(t, diffusion, hbar);
  table.winding_cutoff = L;
  const int K = max_harmonic;
  table.coefficients.assign(static_cast<std::size_t>(2 * L + 1) * (2 * K + 1), cplx{});
  for (int k = -K; k <= K; ++k) {
    const auto col = kernel_column(L, k, t, diffusion, hbar, inertia, convention);
    for (int l = -L; l <= L; ++l) table.coefficients[static_cast<std::size_t>(l + L) * (2 * K + 1) + (k + K)] = col[l + L];
  }
  table.alpha = angle_grid(n_alpha);
  table.values.assign(static_cast<std::size_t>(2 * L + 1) * n_alpha, 0.0);
  for (int l = -L; l <= L; ++l) {
    for (int i = 0; i < n_alpha; ++i) {
      cplx s{};
      for (int k = -K; k <= K; ++k) s += table.coefficient(l, k) * std::polar(1.0, k * table.alpha[i]);
      s /= 2.0 * pi;
      table.max_imaginary = std::max(table.max_imaginary, std::abs(s.imag()));
      table.values[static_cast<std::size_t>(l + L) * n_alpha + i] = s.real();
    }
  }
  return table;
}

AuxWignerField apply_diffusion_solution(const AuxWignerField& initial, double t, double diffusion, double hbar,
                                        double inertia, KernelConvention convention) {
  const int M = initial.truncation();
  const int L = winding_cutoff(t, diffusion, hbar);
  AuxWignerField out(M);
  const double w = hbar * t / inertia;
  for (int k = -2 * M; k <= 2 * M; ++k) {
    const auto col = kernel_column(L, k, t, diffusion, hbar, inertia, convention);
    for (int n = -2 * M; n <= 2 * M; ++n) {
      if (!out.contains(n, k)) continue;
      cplx s{};
      // source row nu - l has index n - 2l
      for (int l = -L; l <= L; ++l) {
        const int src = n - 2 * l;
        if (initial.contains(src, k)) s += col[l + L] * initial.data()[initial.flat_index(src, k)];
      }
      out.at(n, k) = std::polar(1.0, -0.5 * k * n * w) * s;
    }
  }
  return out;
}

FreeEquilibrium free_equilibrium(double temperature, double hbar, double inertia, int truncation) {
  FreeEquilibrium out;
  const double a = temperature * inertia / (hbar * hbar);
  out.a = a;
  std::vector<double> pops(2 * truncation + 1, 0.0);
  const double log8 = std::log(8.0);
  for (int m = -truncation; m <= truncation; ++m) {
    int sign = 0;
    const double lb = log_abs_binomial(4.0 * a, 2.0 * a + m, sign);
    if (sign < 0) ++out.clipped;
    if (sign > 0) {
      pops[m + truncation] = std::exp(lb - a * log8);
      out.raw_sum += pops[m + truncation];
    }
  }
  out.state = DensityMatrix::diagonal(truncation, pops);
  return out;
}

DensityMatrix free_equilibrium_exact(double temperature, double hbar, double inertia, int truncation) {
  const double a = temperature * inertia / (hbar * hbar);
  std::vector<double> logs(2 * truncation + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (int m = -truncation; m <= truncation; ++m) {
    int sign = 0;
    const double lb = log_abs_binomial(8.0 * a, 4.0 * a + m, sign);
    logs[m + truncation] = sign == 0 ? -std::numeric_limits<double>::infinity() : 2.0 * lb;
    top = std::max(top, logs[m + truncation]);
  }
  std::vector<double> pops(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) pops[i] = std::exp(logs[i] - top);
  return DensityMatrix::diagonal(truncation, pops);
}

GibbsResidual gibbs_residual(const PotentialSpec& potential, const BathParams& bath, int truncation) {
  GibbsResidual out;
  out.epsilon1 = bath.epsilon1();
  out.epsilon2 = bath.epsilon2(potential);
  GeneratorSpec spec;
  spec.bath = bath;
  spec.potential = potential;
  spec.mode = GeneratorMode::full;
  spec.representation = Representation::matrix;

  const auto rho = gibbs_state(potential, bath, truncation);
  const Matrix d = dissipator_matrix(rho, spec).matrix();
  out.residual = trace_norm_hermitian(d);

  const double T = bath.temperature();
  const double scale = bath.hbar() * bath.hbar() * bath.gamma() / (T * T * bath.inertia());
  const Matrix lead = scale * (Matrix(potential_curvature_matrix(potential, truncation)) * rho.matrix());
  out.predicted_leading = trace_norm(lead);

  if (potential.empty()) {
    out.potential_part = 0.0;
  } else {
    const auto free = gibbs_state({}, bath, truncation);
    out.potential_part = trace_norm_hermitian(d - dissipator_matrix(free, spec).matrix());
  }
  return out;
}

}  // namespace rotor
