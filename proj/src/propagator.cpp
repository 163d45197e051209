#include "rotor/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/SparseLU>

#include "rotor/errors.hpp"
#include "rotor/metrics.hpp"
#include "rotor/operators.hpp"

namespace rotor {

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::rk4_fixed ? "rk4_fixed" : "rk4_adaptive";
}

Integrator parse_integrator(std::string_view text) {
  if (text == "rk4_fixed") return Integrator::rk4_fixed;
  if (text == "rk4_adaptive") return Integrator::rk4_adaptive;
  throw ConfigError("unknown integrator '" + std::string(text) + "'");
}

void EvolutionConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("evolution: dt must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("evolution: t_final must be nonnegative");
  for (double s : snapshot_times) {
    if (s < 0.0 || s > t_final * (1.0 + 1e-12)) throw ConfigError("evolution: snapshot time outside [0, t_final]");
  }
  if (integrator == Integrator::rk4_adaptive && !(tolerance > 1e-14 && tolerance < 1e-3)) {
    throw ConfigError("evolution: adaptive tolerance must lie in (1e-14, 1e-3)");
  }
  if (record_interval < 0.0) throw ConfigError("evolution: record_interval must be nonnegative");
  if (n_alpha < 0) throw ConfigError("evolution: n_alpha must be nonnegative");
}

double suggested_step(const GeneratorSpec& spec, int truncation, double safety) {
  const double hbar = spec.bath.hbar();
  const double M = truncation;
  double rate = hbar * M * M / (2.0 * spec.bath.inertia());
  double v = 0.0;
  for (const auto& h : spec.potential.terms()) v += std::abs(h.a) + std::abs(h.b);
  rate += 2.0 * v / hbar;
  rate += 4.0 * spec.momentum_diffusion() / (hbar * hbar);
  rate += spec.friction() * (M + 1.0);
  rate += 8.0 * spec.angular_diffusion() * (M + 1.0) * (M + 1.0);
  return safety / std::max(rate, 1e-300);
}

namespace {

// Classical fourth-order Runge-Kutta on the flat state vector.
class Rk4 {
 public:
  explicit Rk4(const Generator& g)
      : g_(g), k1_(g.state_size()), k2_(g.state_size()), k3_(g.state_size()), k4_(g.state_size()),
        tmp_(g.state_size()) {}

  void step(Vector& y, double h) {
    eval(y, k1_);
    tmp_ = y + (0.5 * h) * k1_;
    eval(tmp_, k2_);
    tmp_ = y + (0.5 * h) * k2_;
    eval(tmp_, k3_);
    tmp_ = y + h * k3_;
    eval(tmp_, k4_);
    y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

  void eval(const Vector& y, Vector& out) const {
    g_.apply(std::span<const cplx>(y.data(), y.size()), std::span<cplx>(out.data(), out.size()));
  }

 private:
  const Generator& g_;
  Vector k1_, k2_, k3_, k4_, tmp_;
};

Vector flat(const Generator& g, const DensityMatrix& rho) {
  const auto v = g.flatten(rho);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

DensityMatrix unflat(const Generator& g, const Vector& y) {
  return g.unflatten(std::span<const cplx>(y.data(), y.size()));
}

// Population on |m| = M read straight from the flat state.
class BoundaryProbe {
 public:
  BoundaryProbe(const Generator& g) {
    const int M = g.truncation();
    if (g.representation() == Representation::matrix) {
      const std::size_t n = 2 * M + 1;
      lo_ = 0;
      hi_ = n * n - 1;
      scale_ = 1.0;
    } else {
      const AuxWignerField layout(M);
      lo_ = layout.flat_index(-2 * M, 0);
      hi_ = layout.flat_index(2 * M, 0);
      scale_ = 2.0 * std::numbers::pi;
    }
    single_ = (M == 0);
  }
  double operator()(const Vector& y) const {
    if (single_) return scale_ * y(lo_).real();
    return scale_ * (y(lo_).real() + y(hi_).real());
  }

 private:
  Eigen::Index lo_ = 0, hi_ = 0;
  double scale_ = 1.0;
  bool single_ = false;
};

struct Stop {
  double t;
  bool record;
  bool snapshot;
};

std::vector<Stop> schedule(const EvolutionConfig& cfg) {
  std::vector<Stop> stops;
  const double interval = cfg.record_interval > 0.0 ? cfg.record_interval : cfg.t_final / 200.0;
  if (interval > 0.0) {
    for (long j = 0;; ++j) {
      const double t = j * interval;
      if (t > cfg.t_final * (1.0 - 1e-12)) break;
      stops.push_back({t, true, false});
    }
  }
  stops.push_back({cfg.t_final, true, false});
  for (double s : cfg.snapshot_times) stops.push_back({std::min(s, cfg.t_final), false, true});
  std::sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) { return a.t < b.t; });
  std::vector<Stop> merged;
  const double eps = 1e-12 * std::max(1.0, cfg.t_final);
  for (const auto& s : stops) {
    if (!merged.empty() && std::abs(merged.back().t - s.t) <= eps) {
      merged.back().record |= s.record;
      merged.back().snapshot |= s.snapshot;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

}  // namespace

EvolutionResult evolve(const DensityMatrix& initial, const GeneratorSpec& spec, const EvolutionConfig& cfg) {
  cfg.validate();
  const int M = initial.truncation();
  const Generator g(spec, M);
  const int n_alpha = cfg.n_alpha > 0 ? cfg.n_alpha : 4 * M + 2;
  const Matrix h_matrix = hamiltonian(spec.potential, spec.bath, M);
  const double hbar = spec.bath.hbar();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (cfg.reference && cfg.reference->truncation() != M) {
    throw ConfigError("evolution: reference state has a different truncation");
  }

  EvolutionResult result;
  auto& s = result.series;
  Vector y = flat(g, initial);
  Rk4 rk(g);
  const BoundaryProbe probe(g);
  double leakage = probe(y);

  auto check_leakage = [&](double t) {
    leakage = std::max(leakage, probe(y));
    if (cfg.abort_on_leakage && leakage > cfg.leakage_threshold) {
      std::ostringstream msg;
      msg << "boundary population " << leakage << " exceeds " << cfg.leakage_threshold << " at t=" << t
          << "; increase M (now " << M << ")";
      throw NumericalAbort(msg.str());
    }
  };

  auto record = [&](double t, const DensityMatrix& rho) {
    s.t.push_back(t);
    const double tr = rho.trace();
    s.trace.push_back(tr);
    result.max_trace_drift = std::max(result.max_trace_drift, std::abs(tr - 1.0));
    s.mean_p.push_back(rho.mean_momentum(hbar));
    s.mean_p2.push_back(rho.mean_momentum_squared(hbar));
    s.energy.push_back(energy(rho, h_matrix));
    s.purity.push_back(rho.purity());
    s.min_wigner.push_back(cfg.track_wigner_min ? full_wigner(rho, n_alpha).min() : nan);
    s.leakage.push_back(leakage);
    const double lmin = rho.min_eigenvalue();
    s.min_eigenvalue.push_back(lmin);
    result.min_eigenvalue = std::min(result.min_eigenvalue, lmin);
    if (cfg.check_positivity) {
      if (lmin < cfg.positivity_threshold) {
        std::ostringstream msg;
        msg << "density matrix eigenvalue " << lmin << " below " << cfg.positivity_threshold << " at t=" << t;
        throw NumericalAbort(msg.str());
      }
    }
    s.distance_to_reference.push_back(cfg.reference ? trace_distance(rho, *cfg.reference) : nan);
  };

  auto visit = [&](const Stop& stop) {
    if (!stop.record && !stop.snapshot) return;
    const DensityMatrix rho = unflat(g, y);
    if (stop.record) record(stop.t, rho);
    if (stop.snapshot) result.snapshots.push_back({stop.t, rho});
  };

  double t = 0.0;
  double h = cfg.dt;
  Vector half(y.size()), full(y.size());
  for (const auto& stop : schedule(cfg)) {
    const double eps = 1e-12 * std::max(1.0, stop.t);
    while (stop.t - t > eps) {
      const double remaining = stop.t - t;
      if (cfg.integrator == Integrator::rk4_fixed) {
        const double step = std::min(cfg.dt, remaining);
        rk.step(y, step);
        t = (step == remaining) ? stop.t : t + step;
        ++result.steps;
      } else {
        const double step = std::min(h, remaining);
        full = y;
        rk.step(full, step);
        half = y;
        rk.step(half, 0.5 * step);
        rk.step(half, 0.5 * step);
        const double err = (half - full).cwiseAbs().maxCoeff() / 15.0;
        const double factor = err > 0.0 ? 0.9 * std::pow(cfg.tolerance / err, 0.2) : 5.0;
        if (err <= cfg.tolerance) {
          y = half + (half - full) / 15.0;
          t = (step == remaining) ? stop.t : t + step;
          ++result.steps;
          // a step clipped to a stop time says nothing about the usable size
          if (step == h || factor < 1.0) h = step * std::clamp(factor, 0.2, 5.0);
        } else {
          ++result.rejected_steps;
          h = step * std::clamp(factor, 0.1, 0.9);
          if (h < 1e-14 * std::max(1.0, cfg.t_final)) throw NumericalAbort("adaptive step size underflow");
        }
      }
      check_leakage(t);
    }
    t = stop.t;
    visit(stop);
  }
  result.final_state = unflat(g, y);
  result.max_leakage = leakage;
  return result;
}

double generator_residual(const Generator& g, const DensityMatrix& rho, bool conditioned) {
  const Vector y = flat(g, rho);
  Vector d(y.size());
  g.apply(std::span<const cplx>(y.data(), y.size()), std::span<cplx>(d.data(), d.size()));
  Matrix dm = unflat(g, d).matrix();
  if (conditioned) dm -= (dm.trace().real() / rho.trace()) * rho.matrix();
  return trace_norm_hermitian(dm);
}

namespace {

[[noreturn]] void not_converged(const SteadyStateResult& out, double t, double tolerance) {
  std::ostringstream msg;
  msg << "steady state not reached by t=" << t << ": residual " << out.history.back().second << " > " << tolerance;
  throw SteadyStateError(msg.str(), out.history);
}

}  // namespace

SteadyStateResult find_steady_state(const GeneratorSpec& spec, const DensityMatrix& seed,
                                    const SteadyStateConfig& cfg) {
  if (!(spec.friction() > 0.0)) {
    throw ConfigError("find_steady_state: needs a dissipative mode with Gamma > 0");
  }
  const int M = seed.truncation();
  SteadyStateResult out;
  double t = 0.0;

  auto converged = [&](const Generator& g, const DensityMatrix& rho) {
    const double r = generator_residual(g, rho, true);
    out.history.emplace_back(t, r);
    if (r < cfg.tolerance) {
      out.state = rho;
      out.time = t;
      out.residual = r;
      out.raw_residual = generator_residual(g, rho);
      const Vector y = flat(g, rho);
      Vector d(y.size());
      g.apply(std::span<const cplx>(y.data(), y.size()), std::span<cplx>(d.data(), d.size()));
      out.leakage_rate = -unflat(g, d).trace();
      return true;
    }
    return false;
  };

  if (cfg.method == SteadyStateMethod::implicit_euler) {
    GeneratorSpec aux = spec;
    aux.representation = Representation::aux_wigner;
    const Generator g(aux, M);
    const double h = cfg.dt > 0.0 ? cfg.dt : 100.0 / spec.friction();
    SparseMatrix a = -h * g.assemble();
    for (Eigen::Index i = 0; i < a.rows(); ++i) a.coeffRef(i, i) += 1.0;
    a.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw NumericalAbort("find_steady_state: factorisation failed");
    Vector y = flat(g, seed);
    for (;;) {
      DensityMatrix rho = unflat(g, y);
      if (converged(g, rho)) return out;
      if (t >= cfg.max_time) break;
      y = lu.solve(y);
      rho = unflat(g, y);
      y = flat(g, DensityMatrix(M, rho.matrix() / rho.trace()));
      t += h;
    }
    not_converged(out, t, cfg.tolerance);
  }

  const Generator g(spec, M);
  const double dt = cfg.dt > 0.0 ? cfg.dt : suggested_step(spec, M, 0.5);
  const double interval = cfg.check_interval > 0.0 ? cfg.check_interval : 1.0 / spec.friction();
  const long steps_per_check = std::max(1L, static_cast<long>(std::ceil(interval / dt)));
  const double h = interval / steps_per_check;
  Vector y = flat(g, seed);
  Rk4 rk(g);
  for (;;) {
    if (converged(g, unflat(g, y))) return out;
    if (t >= cfg.max_time) break;
    for (long j = 0; j < steps_per_check; ++j) rk.step(y, h);
    t += interval;
  }
  not_converged(out, t, cfg.tolerance);
}

std::vector<double> wigner_min_tracker(const std::vector<Snapshot>& snapshots, int n_alpha) {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) {
    const int n = n_alpha > 0 ? n_alpha : 4 * s.rho.truncation() + 2;
    out.push_back(full_wigner(s.rho, n).min());
  }
  return out;
}

}  // namespace rotor
