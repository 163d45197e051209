#include "rotor/classical_fp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

#include "rotor/errors.hpp"
#include "rotor/special.hpp"

namespace rotor {

using std::numbers::pi;

double ClassicalGrid::alpha(int i) const { return -pi + 2.0 * pi * i / n_alpha; }
double ClassicalGrid::p(int j) const { return -p_max + (j + 0.5) * dp(); }
double ClassicalGrid::d_alpha() const { return 2.0 * pi / n_alpha; }
double ClassicalGrid::dp() const { return 2.0 * p_max / n_p; }

ClassicalGrid ClassicalGrid::thermal(int n_alpha, int n_p, double temperature, double inertia) {
  return {n_alpha, n_p, 6.0 * std::sqrt(temperature * inertia)};
}

ClassicalField::ClassicalField(ClassicalGrid g)
    : grid(g), values(static_cast<std::size_t>(g.n_alpha) * g.n_p, 0.0) {}

double ClassicalField::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.d_alpha() * grid.dp();
}

double ClassicalField::mean_p() const {
  double s = 0.0;
  for (int j = 0; j < grid.n_p; ++j)
    for (int i = 0; i < grid.n_alpha; ++i) s += grid.p(j) * at(i, j);
  return s * grid.d_alpha() * grid.dp();
}

double ClassicalField::mean_p2() const {
  double s = 0.0;
  for (int j = 0; j < grid.n_p; ++j)
    for (int i = 0; i < grid.n_alpha; ++i) s += grid.p(j) * grid.p(j) * at(i, j);
  return s * grid.d_alpha() * grid.dp();
}

double ClassicalField::min() const { return *std::min_element(values.begin(), values.end()); }

double ClassicalField::l1_norm() const {
  double s = 0.0;
  for (double v : values) s += std::abs(v);
  return s * grid.d_alpha() * grid.dp();
}

double ClassicalField::boundary_density() const {
  double m = 0.0;
  for (int i = 0; i < grid.n_alpha; ++i) m = std::max({m, std::abs(at(i, 0)), std::abs(at(i, grid.n_p - 1))});
  return m;
}

FpParams FpParams::thermal(const PotentialSpec& potential, const BathParams& bath) {
  return {potential, bath.gamma(), bath.diffusion(), bath.inertia()};
}

std::vector<double> fp_rhs(const ClassicalField& field, const FpParams& params) {
  const auto& g = field.grid;
  const int na = g.n_alpha, np = g.n_p;
  std::vector<double> out(field.values.size(), 0.0);

  // -(p/I) dW/dalpha, spectrally per momentum row
  Eigen::FFT<double> fft;
  std::vector<double> row(na), drow(na);
  std::vector<cplx> spec(na);
  for (int j = 0; j < np; ++j) {
    const double* w = field.values.data() + static_cast<std::size_t>(j) * na;
    std::copy(w, w + na, row.begin());
    fft.fwd(spec, row);
    for (int q = 0; q < na; ++q) {
      const int k = q <= na / 2 ? q : q - na;
      spec[q] *= (2 * k == na) ? cplx{} : cplx(0.0, k);
    }
    fft.inv(drow, spec);
    const double v = -g.p(j) / params.inertia;
    double* o = out.data() + static_cast<std::size_t>(j) * na;
    for (int i = 0; i < na; ++i) o[i] = v * drow[i];
  }

  // -dJ/dp with J = -(V' + Gamma p) W - D dW/dp on the interior faces
  std::vector<double> force(na);
  for (int i = 0; i < na; ++i) force[i] = params.potential.derivative(g.alpha(i));
  const double dp = g.dp();
  for (int j = 0; j + 1 < np; ++j) {
    const double pf = -g.p_max + (j + 1) * dp;
    for (int i = 0; i < na; ++i) {
      const double wl = field.at(i, j), wr = field.at(i, j + 1);
      const double flux = -(force[i] + params.gamma * pf) * 0.5 * (wl + wr) - params.diffusion * (wr - wl) / dp;
      out[static_cast<std::size_t>(j) * na + i] -= flux / dp;
      out[static_cast<std::size_t>(j + 1) * na + i] += flux / dp;
    }
  }
  return out;
}

double fp_max_step(const ClassicalGrid& grid, const FpParams& params) {
  double limit = grid.d_alpha() * params.inertia / grid.p_max;
  const double f = params.potential.max_abs_derivative() + params.gamma * grid.p_max;
  if (f > 0.0) limit = std::min(limit, grid.dp() / f);
  if (params.diffusion > 0.0) limit = std::min(limit, grid.dp() * grid.dp() / (2.0 * params.diffusion));
  return 0.5 * limit;
}

ClassicalField fp_step(const ClassicalField& field, const FpParams& params, double dt) {
  const double limit = fp_max_step(field.grid, params);
  if (dt > limit * (1.0 + 1e-12)) {
    throw std::invalid_argument("fp_step: dt=" + std::to_string(dt) + " exceeds the stability limit " +
                                std::to_string(limit));
  }
  const std::size_t n = field.values.size();
  ClassicalField tmp = field;
  const auto k1 = fp_rhs(field, params);
  for (std::size_t i = 0; i < n; ++i) tmp.values[i] = field.values[i] + 0.5 * dt * k1[i];
  const auto k2 = fp_rhs(tmp, params);
  for (std::size_t i = 0; i < n; ++i) tmp.values[i] = field.values[i] + 0.5 * dt * k2[i];
  const auto k3 = fp_rhs(tmp, params);
  for (std::size_t i = 0; i < n; ++i) tmp.values[i] = field.values[i] + dt * k3[i];
  const auto k4 = fp_rhs(tmp, params);
  ClassicalField out = field;
  for (std::size_t i = 0; i < n; ++i) out.values[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

ClassicalField fp_evolve(ClassicalField field, const FpParams& params, double t, double dt) {
  double now = 0.0;
  while (t - now > 1e-12 * std::max(1.0, t)) {
    const double step = std::min(dt, t - now);
    field = fp_step(field, params, step);
    now += step;
  }
  return field;
}

ClassicalField classical_gibbs(const ClassicalGrid& grid, const PotentialSpec& potential, double temperature,
                               double inertia) {
  ClassicalField f(grid);
  double vmin = 0.0;
  for (int i = 0; i < grid.n_alpha; ++i) vmin = std::min(vmin, potential.value(grid.alpha(i)));
  for (int j = 0; j < grid.n_p; ++j) {
    const double kin = grid.p(j) * grid.p(j) / (2.0 * inertia);
    for (int i = 0; i < grid.n_alpha; ++i) {
      f.at(i, j) = std::exp(-(kin + potential.value(grid.alpha(i)) - vmin) / temperature);
    }
  }
  const double m = f.mass();
  for (double& v : f.values) v /= m;
  return f;
}

ClassicalField classical_wavepacket(const ClassicalGrid& grid, double sigma, double alpha0, double hbar) {
  ClassicalField f(grid);
  const double width = hbar / (2.0 * sigma);
  for (int j = 0; j < grid.n_p; ++j) {
    const double z = grid.p(j) / width;
    const double gp = std::exp(-0.5 * z * z) / (std::sqrt(2.0 * pi) * width);
    for (int i = 0; i < grid.n_alpha; ++i) f.at(i, j) = gp * wavepacket_angle_density(sigma, alpha0, grid.alpha(i));
  }
  const double m = f.mass();
  for (double& v : f.values) v /= m;
  return f;
}

double stationarity_residual(const ClassicalField& field, const FpParams& params) {
  const auto d = fp_rhs(field, params);
  double s = 0.0;
  for (double v : d) s += std::abs(v);
  return s * field.grid.d_alpha() * field.grid.dp() / field.l1_norm();
}

double half_integer_weight(const DensityMatrix& rho, int n_alpha) {
  const int M = rho.truncation();
  const auto field = to_aux(rho);
  const auto grid = angle_grid(n_alpha);
  const FullWigner w = full_wigner(field, n_alpha);
  double total = 0.0;
  for (double v : w.values) total += std::abs(v);
  double nonlocal = 0.0;
  for (int i = 0; i < n_alpha; ++i) {
    std::vector<double> half(2 * M);  // W_{m'+1/2} for m' = -M .. M-1
    for (int mp = -M; mp < M; ++mp) half[mp + M] = field.evaluate({2 * mp + 1}, grid[i]).real();
    for (int m = -M; m <= M; ++m) {
      double s = 0.0;
      for (int mp = -M; mp < M; ++mp) s += sinc((m - mp - 0.5) * pi) * half[mp + M];
      const double below = m > -M ? half[m - 1 + M] : 0.0;
      const double above = m < M ? half[m + M] : 0.0;
      nonlocal += std::abs(s - 0.5 * (below + above));
    }
  }
  return total > 0.0 ? nonlocal / total : 0.0;
}

QuantumClassicalComparison quantum_classical_compare(const DensityMatrix& rho, double hbar,
                                                     const ClassicalField& classical) {
  const auto& g = classical.grid;
  const int M = rho.truncation();
  if (g.n_alpha < 4 * M + 2) {
    throw AliasingError("quantum_classical_compare: classical angle grid n_alpha=" + std::to_string(g.n_alpha) +
                        " is below 4M+2=" + std::to_string(4 * M + 2));
  }
  const FullWigner w = full_wigner(rho, g.n_alpha);
  QuantumClassicalComparison out;
  const double da = g.d_alpha(), dp = g.dp();
  std::vector<double> cumulative(g.n_p + 1);
  // mass below momentum p, linear inside each cell
  auto below = [&](double p) {
    const double x = (p + g.p_max) / dp;
    if (x <= 0.0) return 0.0;
    if (x >= g.n_p) return cumulative[g.n_p];
    const int j = static_cast<int>(x);
    return cumulative[j] + (x - j) * (cumulative[j + 1] - cumulative[j]);
  };
  for (int i = 0; i < g.n_alpha; ++i) {
    cumulative[0] = 0.0;
    for (int j = 0; j < g.n_p; ++j) cumulative[j + 1] = cumulative[j] + classical.at(i, j) * dp * da;
    for (int m = -M; m <= M; ++m) {
      const double c = below(hbar * (m + 0.5)) - below(hbar * (m - 0.5));
      out.l1_distance += std::abs(w.at(i, m) * da - c);
    }
    const double outside = cumulative[g.n_p] - (below(hbar * (M + 0.5)) - below(-hbar * (M + 0.5)));
    out.classical_mass_outside += outside;
    out.l1_distance += std::abs(outside);
  }
  out.half_integer_weight = half_integer_weight(rho, g.n_alpha);
  return out;
}

}  // namespace rotor
