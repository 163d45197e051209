#include "rotor/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "rotor/errors.hpp"
#include "rotor/metrics.hpp"
#include "rotor/operators.hpp"

namespace rotor {

int worker_count() {
  if (const char* env = std::getenv("ROTOR_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (n < 1 || lo <= 0 || hi < lo) throw ConfigError("log_spaced needs n >= 1 and 0 < lo <= hi");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("loglog_slope needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepPoint sweep_point(const SweepConfig& cfg, double temperature_tilde) {
  const auto start = std::chrono::steady_clock::now();
  SweepPoint pt;
  pt.temperature_tilde = temperature_tilde;
  try {
    const Scaling s(cfg.hbar_tilde);
    GeneratorSpec spec;
    spec.bath = s.bath(temperature_tilde, cfg.gamma_tilde);
    spec.potential = s.potential(cfg.potential);
    pt.epsilon1 = spec.bath.epsilon1();
    pt.epsilon2 = spec.bath.epsilon2(spec.potential);

    int M = std::max(cfg.min_truncation,
                     gibbs_truncation(spec.potential, spec.bath, 1e-12, cfg.min_truncation, cfg.max_truncation));
    std::optional<DensityMatrix> previous;
    while (true) {
      const auto gibbs = gibbs_state(spec.potential, spec.bath, M, 1.0);
      const DensityMatrix seed = previous ? previous->padded(M) : gibbs;
      const auto ss = find_steady_state(spec, seed, cfg.steady);
      pt.truncation = M;
      pt.boundary_population = ss.state.boundary_population();
      pt.residual = ss.residual;
      pt.d1 = trace_distance(ss.state, gibbs);
      if (pt.boundary_population < cfg.leakage_target) break;
      if (M >= cfg.max_truncation) {
        std::ostringstream msg;
        msg << "boundary population " << pt.boundary_population << " at M = " << M << " above "
            << cfg.leakage_target;
        throw TruncationError(msg.str());
      }
      previous = ss.state;
      M = std::min(cfg.max_truncation, M + std::max(4, M / 4));
    }
    pt.ok = true;
  } catch (const std::exception& e) {
    pt.ok = false;
    pt.error = e.what();
  }
  pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return pt;
}

void fill_local_slopes(std::vector<SweepPoint>& points) {
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].ok && points[i].d1 > 0) good.push_back(i);
  for (auto& p : points) p.local_slope = std::nan("");
  if (good.size() < 2) return;
  for (std::size_t j = 0; j < good.size(); ++j) {
    const auto& a = points[good[j == 0 ? 0 : j - 1]];
    const auto& b = points[good[j + 1 == good.size() ? j : j + 1]];
    points[good[j]].local_slope =
        std::log(b.d1 / a.d1) / std::log(b.temperature_tilde / a.temperature_tilde);
  }
}

std::vector<SweepPoint> sweep_temperature(const SweepConfig& cfg,
                                          const std::function<void(const SweepPoint&)>& on_point) {
  const std::size_t n = cfg.temperatures.size();
  std::vector<SweepPoint> points(n);
  const int workers = std::max(1, std::min<int>(cfg.workers > 0 ? cfg.workers : worker_count(), n));
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      points[i] = sweep_point(cfg, cfg.temperatures[i]);
      if (on_point) {
        std::lock_guard lock(report);
        on_point(points[i]);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  fill_local_slopes(points);
  return points;
}

double window_slope(const std::vector<SweepPoint>& points, double lo, double hi) {
  std::vector<double> x, y;
  for (const auto& p : points)
    if (p.ok && p.temperature_tilde >= lo * (1 - 1e-12) && p.temperature_tilde <= hi * (1 + 1e-12)) {
      x.push_back(p.temperature_tilde);
      y.push_back(p.d1);
    }
  return loglog_slope(x, y);
}

}  // namespace rotor
