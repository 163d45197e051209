#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rotor/scenario.hpp"

namespace rotor {

namespace fs = std::filesystem;

namespace {

constexpr const char* kPrelude = R"(import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

HERE = Path(__file__).resolve().parent


def read_csv(name):
    with open(HERE / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


def column(rows, key):
    return np.array([float(r[key]) for r in rows])

)";

constexpr const char* kWigner = R"(
from matplotlib.colors import TwoSlopeNorm

rows = read_csv("wigner_snapshots.csv")
frames = defaultdict(list)
for r in rows:
    frames[float(r["t_tilde"])].append(r)

for index, t in enumerate(sorted(frames)):
    block = frames[t]
    alpha = np.unique(column(block, "alpha"))
    m = np.unique(column(block, "m").astype(int))
    grid = np.zeros((m.size, alpha.size))
    ia = {a: i for i, a in enumerate(alpha)}
    for r in block:
        grid[int(r["m"]) - m[0], ia[float(r["alpha"])]] = float(r["W"])
    hi = grid.max()
    lo = min(grid.min(), -1e-12 * hi)
    # red at the maximum, blue at the (negative) minimum, white at zero
    norm = TwoSlopeNorm(vmin=lo, vcenter=0.0, vmax=hi)
    fig, ax = plt.subplots(figsize=(5, 4))
    mesh = ax.pcolormesh(alpha, m, grid, cmap="RdBu_r", norm=norm, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="W")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("m")
    ax.set_title(rf"$\tilde t$ = {t:.4g}")
    fig.tight_layout()
    fig.savefig(HERE / f"wigner_{index}.png", dpi=150)
    plt.close(fig)
)";

constexpr const char* kMarginals = R"(
fig, (ax_a, ax_m) = plt.subplots(1, 2, figsize=(10, 4))

angle = read_csv("marginals_angle.csv")
by_t = defaultdict(list)
for r in angle:
    by_t[float(r["t_tilde"])].append(r)
for t in sorted(by_t):
    ax_a.plot(column(by_t[t], "alpha"), column(by_t[t], "density"), label=rf"$\tilde t$ = {t:.4g}")
ax_a.set_xlabel(r"$\alpha$")
ax_a.set_ylabel("angle density")
ax_a.legend()

mom = read_csv("marginals_momentum.csv")
by_t = defaultdict(list)
for r in mom:
    by_t[float(r["t_tilde"])].append(r)
for t in sorted(by_t):
    ax_m.plot(column(by_t[t], "p_tilde"), column(by_t[t], "probability"), marker=".", label=rf"$\tilde t$ = {t:.4g}")
ax_m.set_xlabel(r"$\tilde p = \tilde\hbar m$")
ax_m.set_ylabel("probability")
ax_m.legend()

fig.tight_layout()
fig.savefig(HERE / "marginals.png", dpi=150)
)";

constexpr const char* kObservables = R"(
rows = read_csv("observables.csv")
keys = [k for k in rows[0].keys() if k != "t_tilde"]
t = column(rows, "t_tilde")
fig, axes = plt.subplots(len(keys), 1, figsize=(6, 2.2 * len(keys)), sharex=True, squeeze=False)
for ax, key in zip(axes[:, 0], keys):
    ax.plot(t, column(rows, key))
    ax.set_ylabel(key)
axes[-1, 0].set_xlabel(r"$\tilde t$")
fig.tight_layout()
fig.savefig(HERE / "observables.png", dpi=150)
)";

constexpr const char* kSteady = R"(
from matplotlib.colors import TwoSlopeNorm

pops = read_csv("steady_populations.csv")
fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(column(pops, "p_tilde"), column(pops, "rho_eq"), "o-", label="steady state")
ax.semilogy(column(pops, "p_tilde"), column(pops, "rho_gibbs"), "x--", label="Gibbs")
ax.set_xlabel(r"$\tilde p$")
ax.set_ylabel("population")
ax.legend()
fig.tight_layout()
fig.savefig(HERE / "steady_populations.png", dpi=150)
plt.close(fig)

rows = read_csv("wigner_steady.csv")
alpha = np.unique(column(rows, "alpha"))
m = np.unique(column(rows, "m").astype(int))
ia = {a: i for i, a in enumerate(alpha)}
for key in ("W_eq", "W_gibbs"):
    grid = np.zeros((m.size, alpha.size))
    for r in rows:
        grid[int(r["m"]) - m[0], ia[float(r["alpha"])]] = float(r[key])
    hi = grid.max()
    norm = TwoSlopeNorm(vmin=min(grid.min(), -1e-12 * hi), vcenter=0.0, vmax=hi)
    fig, ax = plt.subplots(figsize=(5, 4))
    mesh = ax.pcolormesh(alpha, m, grid, cmap="RdBu_r", norm=norm, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=key)
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("m")
    fig.tight_layout()
    fig.savefig(HERE / f"{key.lower()}.png", dpi=150)
    plt.close(fig)
)";

constexpr const char* kSweep = R"(
rows = [r for r in read_csv("sweep.csv") if r["status"] == "ok"]
T = column(rows, "T_tilde")
d1 = column(rows, "d1")
fig, ax = plt.subplots(figsize=(6, 4.5))
ax.loglog(T, d1, "o-", label=r"$d_1(\rho_{eq}, \rho_G)$")

# slope guides anchored in the middle of each window
for lo, hi, slope, style in ((MID_LO, MID_HI, -2, "--"), (HIGH_LO, HIGH_HI, -1, ":")):
    sel = (T >= lo * (1 - 1e-12)) & (T <= hi * (1 + 1e-12))
    if sel.sum() == 0:
        continue
    t0 = np.sqrt(lo * hi)
    y0 = np.exp(np.interp(np.log(t0), np.log(T), np.log(d1)))
    tt = np.geomspace(lo / 2, hi * 2, 20)
    ax.loglog(tt, 1.5 * y0 * (tt / t0) ** slope, "k" + style, lw=1, label=rf"$\tilde T^{{{slope}}}$")

ax.set_xlabel(r"$\tilde T$")
ax.set_ylabel("trace distance")
ax.legend()
fig.tight_layout()
fig.savefig(HERE / "sweep.png", dpi=150)
)";

std::map<std::string, std::string> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing artifact: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

void require_file(const fs::path& path) {
  if (!fs::exists(path)) throw std::runtime_error("missing artifact: " + path.string());
}

std::size_t data_rows(const fs::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n > 0 ? n - 1 : 0;
}

fs::path write_script(const fs::path& dir, const std::string& name, const std::string& body) {
  const auto path = dir / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kPrelude << body;
  return path;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

}  // namespace

std::vector<fs::path> emit_plots(const fs::path& dir) {
  const auto manifest = read_manifest(dir / "manifest.txt");
  const auto kind_it = manifest.find("kind");
  if (kind_it == manifest.end()) throw std::runtime_error("manifest.txt has no kind entry");
  const std::string kind = kind_it->second;

  std::vector<fs::path> scripts;
  std::ostringstream index;
  if (kind == "evolve") {
    for (const char* f : {"observables.csv", "marginals_angle.csv", "marginals_momentum.csv", "wigner_snapshots.csv"})
      require_file(dir / f);
    scripts.push_back(write_script(dir, "plot_observables.py", kObservables));
    index << "plot_observables.py: observables.csv -> observables.png\n";
    scripts.push_back(write_script(dir, "plot_marginals.py", kMarginals));
    index << "plot_marginals.py: marginals_angle.csv marginals_momentum.csv -> marginals.png\n";
    if (data_rows(dir / "wigner_snapshots.csv") > 0) {
      scripts.push_back(write_script(dir, "plot_wigner.py", kWigner));
      index << "plot_wigner.py: wigner_snapshots.csv -> wigner_<i>.png, one per snapshot\n";
    }
  } else if (kind == "steady") {
    for (const char* f : {"steady_populations.csv", "wigner_steady.csv"}) require_file(dir / f);
    scripts.push_back(write_script(dir, "plot_steady.py", kSteady));
    index << "plot_steady.py: steady_populations.csv wigner_steady.csv -> steady_populations.png w_eq.png w_gibbs.png\n";
  } else if (kind == "sweep") {
    require_file(dir / "sweep.csv");
    auto window = [&](const char* key) {
      const auto it = manifest.find(key);
      if (it == manifest.end()) throw std::runtime_error(std::string("manifest.txt has no ") + key);
      std::istringstream ss(it->second);
      std::string lo, hi;
      ss >> lo >> hi;
      return std::pair{lo, hi};
    };
    const auto [mlo, mhi] = window("mid_window");
    const auto [hlo, hhi] = window("high_window");
    std::string body = kSweep;
    body = replace_all(body, "MID_LO", mlo);
    body = replace_all(body, "MID_HI", mhi);
    body = replace_all(body, "HIGH_LO", hlo);
    body = replace_all(body, "HIGH_HI", hhi);
    scripts.push_back(write_script(dir, "plot_sweep.py", body));
    index << "plot_sweep.py: sweep.csv -> sweep.png\n";
  } else {
    throw std::runtime_error("unknown run kind '" + kind + "' in manifest.txt");
  }
  std::ofstream(dir / "plots_manifest.txt") << index.str();
  return scripts;
}

}  // namespace rotor
