#include <algorithm>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rotor/errors.hpp"
#include "rotor/scenario.hpp"

namespace rotor {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

void require(bool ok, const std::string& what) {
  if (!ok) fail(what);
}

void allow_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> keys) {
  if (!node.IsMap()) fail(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      fail(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& into, const std::string& where) {
  if (!node[key]) return;
  try {
    into = node[key].as<T>();
  } catch (const YAML::Exception&) {
    fail(where + "." + key + ": wrong type");
  }
}

RunKind parse_kind(const std::string& s) {
  if (s == "evolve") return RunKind::evolve;
  if (s == "steady") return RunKind::steady;
  if (s == "sweep") return RunKind::sweep;
  fail("kind: expected evolve, steady or sweep, got '" + s + "'");
}

InitialKind parse_initial(const std::string& s) {
  if (s == "wavepacket") return InitialKind::wavepacket;
  if (s == "superposition") return InitialKind::superposition;
  if (s == "gibbs") return InitialKind::gibbs;
  if (s == "momentum") return InitialKind::momentum;
  fail("initial.type: expected wavepacket, superposition, gibbs or momentum, got '" + s + "'");
}

}  // namespace

std::string_view to_string(RunKind kind) {
  switch (kind) {
    case RunKind::evolve: return "evolve";
    case RunKind::steady: return "steady";
    case RunKind::sweep: return "sweep";
  }
  return "?";
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::wavepacket: return "wavepacket";
    case InitialKind::superposition: return "superposition";
    case InitialKind::gibbs: return "gibbs";
    case InitialKind::momentum: return "momentum";
  }
  return "?";
}

std::vector<std::string> known_observables() {
  return {"trace", "mean_p", "mean_p2", "energy", "purity", "leakage", "min_eigenvalue", "min_wigner", "d1_gibbs"};
}

GeneratorSpec ScenarioConfig::generator_spec() const {
  const auto s = scaling();
  GeneratorSpec spec;
  spec.bath = s.bath(units.temperature, units.gamma);
  spec.potential = s.potential(potential);
  spec.mode = generator.mode;
  spec.representation = generator.representation;
  // D~ is in units of V0^{3/2} I^{1/2}; internally I = 1 and V0 = 1/hbar~^2
  spec.frictionless_diffusion = generator.diffusion * s.v0() / units.hbar;
  return spec;
}

std::vector<double> ScenarioConfig::resolved_snapshots() const {
  std::vector<double> t = outputs.snapshot_times;
  const double tr = 4 * std::numbers::pi / units.hbar;  // t_r in t~ with I = 1
  for (double f : outputs.revival_fractions) t.push_back(f * tr);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

void ScenarioConfig::validate() const {
  require(!name.empty(), "name: must not be empty");
  require(units.hbar > 0, "units.hbar: must be positive");
  require(units.temperature > 0, "units.temperature: must be positive");
  require(units.gamma >= 0, "units.gamma: must be non-negative");
  require(!units.v0 || *units.v0 > 0, "units.v0: must be positive");

  std::set<int> ks;
  for (const auto& h : potential) {
    require(h.k >= 1, "potential: harmonic k must be >= 1");
    require(ks.insert(h.k).second, "potential: harmonic k listed twice");
  }

  const auto& ev = evolution;
  require(ev.truncation >= 1 && ev.truncation <= 512, "evolution.truncation: must be in [1, 512]");
  require(ev.t_final > 0, "evolution.t_final: must be positive");
  require(ev.dt >= 0, "evolution.dt: must be non-negative");
  require(ev.safety > 0 && ev.safety <= 2, "evolution.safety: must be in (0, 2]");
  require(ev.tolerance > 0, "evolution.tolerance: must be positive");
  require(ev.record_interval >= 0, "evolution.record_interval: must be non-negative");
  require(ev.leakage_threshold > 0, "evolution.leakage_threshold: must be positive");
  require(ev.positivity_threshold <= 0, "evolution.positivity_threshold: must be <= 0");

  require(initial.sigma > 0, "initial.sigma: must be positive");
  if (initial.kind == InitialKind::superposition)
    require(initial.centers.size() >= 2, "initial.centers: a superposition needs two or more centers");
  if (initial.kind == InitialKind::momentum)
    require(std::abs(initial.m) <= ev.truncation, "initial.m: outside the truncation");

  require(generator.diffusion >= 0, "generator.diffusion: must be non-negative");
  if (generator.mode == GeneratorMode::diffusion_only)
    require(generator.diffusion > 0, "generator.diffusion: diffusion_only needs a positive diffusion");

  require(!outputs.directory.empty(), "outputs.directory: must not be empty");
  for (double t : outputs.snapshot_times) require(t >= 0, "outputs.snapshot_times: must be non-negative");
  for (double f : outputs.revival_fractions) require(f >= 0, "outputs.revival_fractions: must be non-negative");
  if (kind == RunKind::evolve)
    for (double t : resolved_snapshots())
      require(t <= ev.t_final * (1 + 1e-12), "outputs: snapshot after evolution.t_final");
  const auto known = known_observables();
  for (const auto& o : outputs.observables)
    require(std::find(known.begin(), known.end(), o) != known.end(), "outputs.observables: unknown '" + o + "'");
  require(outputs.n_alpha == 0 || outputs.n_alpha >= 4 * ev.truncation + 2,
          "outputs.n_alpha: must be 0 or at least 4M + 2");

  require(steady.tolerance > 0, "steady.tolerance: must be positive");
  require(steady.max_time > 0, "steady.max_time: must be positive");
  if (kind != RunKind::evolve) require(units.gamma > 0, "units.gamma: steady states need friction");

  const auto& sw = sweep;
  require(sw.t_min > 0 && sw.t_max > sw.t_min, "sweep: need 0 < t_min < t_max");
  require(sw.points >= 2, "sweep.points: need two or more");
  require(sw.leakage_target > 0, "sweep.leakage_target: must be positive");
  require(sw.max_truncation >= 1, "sweep.max_truncation: must be positive");
  require(sw.mid_lo < sw.mid_hi && sw.high_lo < sw.high_hi, "sweep: slope windows need lo < hi");
}

static ScenarioConfig parse_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(std::string("invalid YAML: ") + e.what());
  }
  if (!root || root.IsNull()) fail("empty configuration");
  allow_keys(root, "config",
             {"name", "kind", "units", "potential", "initial", "generator", "evolution", "outputs", "steady", "sweep"});

  ScenarioConfig c;
  read(root, "name", c.name, "config");
  if (root["kind"]) c.kind = parse_kind(root["kind"].as<std::string>());

  if (const auto u = root["units"]) {
    allow_keys(u, "units", {"hbar", "temperature", "gamma", "v0"});
    read(u, "hbar", c.units.hbar, "units");
    read(u, "temperature", c.units.temperature, "units");
    read(u, "gamma", c.units.gamma, "units");
    if (u["v0"]) {
      double v = 0;
      read(u, "v0", v, "units");
      c.units.v0 = v;
    }
  }

  if (const auto p = root["potential"]) {
    if (!p.IsSequence()) fail("potential: expected a list of harmonics");
    for (const auto& h : p) {
      allow_keys(h, "potential[]", {"k", "cos", "sin"});
      Harmonic term;
      read(h, "k", term.k, "potential[]");
      read(h, "cos", term.a, "potential[]");
      read(h, "sin", term.b, "potential[]");
      c.potential.push_back(term);
    }
  }

  if (const auto i = root["initial"]) {
    allow_keys(i, "initial", {"type", "sigma", "alpha0", "centers", "m"});
    if (i["type"]) c.initial.kind = parse_initial(i["type"].as<std::string>());
    read(i, "sigma", c.initial.sigma, "initial");
    read(i, "alpha0", c.initial.alpha0, "initial");
    read(i, "centers", c.initial.centers, "initial");
    read(i, "m", c.initial.m, "initial");
  }

  if (const auto g = root["generator"]) {
    allow_keys(g, "generator", {"mode", "representation", "diffusion"});
    if (g["mode"]) c.generator.mode = parse_mode(g["mode"].as<std::string>());
    if (g["representation"])
      c.generator.representation = parse_representation(g["representation"].as<std::string>());
    read(g, "diffusion", c.generator.diffusion, "generator");
  }

  if (const auto e = root["evolution"]) {
    allow_keys(e, "evolution",
               {"truncation", "t_final", "dt", "safety", "integrator", "tolerance", "record_interval",
                "leakage_threshold", "positivity_threshold"});
    read(e, "truncation", c.evolution.truncation, "evolution");
    read(e, "t_final", c.evolution.t_final, "evolution");
    read(e, "dt", c.evolution.dt, "evolution");
    read(e, "safety", c.evolution.safety, "evolution");
    if (e["integrator"])
      c.evolution.integrator =
          parse_integrator(e["integrator"].as<std::string>());
    read(e, "tolerance", c.evolution.tolerance, "evolution");
    read(e, "record_interval", c.evolution.record_interval, "evolution");
    read(e, "leakage_threshold", c.evolution.leakage_threshold, "evolution");
    read(e, "positivity_threshold", c.evolution.positivity_threshold, "evolution");
  }

  if (const auto o = root["outputs"]) {
    allow_keys(o, "outputs", {"directory", "snapshot_times", "revival_fractions", "observables", "n_alpha"});
    read(o, "directory", c.outputs.directory, "outputs");
    read(o, "snapshot_times", c.outputs.snapshot_times, "outputs");
    read(o, "revival_fractions", c.outputs.revival_fractions, "outputs");
    read(o, "observables", c.outputs.observables, "outputs");
    read(o, "n_alpha", c.outputs.n_alpha, "outputs");
  }

  if (const auto s = root["steady"]) {
    allow_keys(s, "steady", {"tolerance", "max_time"});
    read(s, "tolerance", c.steady.tolerance, "steady");
    read(s, "max_time", c.steady.max_time, "steady");
  }

  if (const auto s = root["sweep"]) {
    allow_keys(s, "sweep",
               {"t_min", "t_max", "points", "leakage_target", "max_truncation", "mid_window", "high_window"});
    read(s, "t_min", c.sweep.t_min, "sweep");
    read(s, "t_max", c.sweep.t_max, "sweep");
    read(s, "points", c.sweep.points, "sweep");
    read(s, "leakage_target", c.sweep.leakage_target, "sweep");
    read(s, "max_truncation", c.sweep.max_truncation, "sweep");
    auto window = [&](const char* key, double& lo, double& hi) {
      if (!s[key]) return;
      std::vector<double> w;
      read(s, key, w, "sweep");
      if (w.size() != 2) fail(std::string("sweep.") + key + ": expected [lo, hi]");
      lo = w[0];
      hi = w[1];
    };
    window("mid_window", c.sweep.mid_lo, c.sweep.mid_hi);
    window("high_window", c.sweep.high_lo, c.sweep.high_hi);
  }

  c.validate();
  return c;
}

ScenarioConfig parse_config(const std::string& text) {
  try {
    return parse_yaml(text);
  } catch (const YAML::Exception& e) {
    fail(std::string("malformed config: ") + e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_yaml(const ScenarioConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(c.kind));

  out << YAML::Key << "units" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "hbar" << YAML::Value << c.units.hbar;
  out << YAML::Key << "temperature" << YAML::Value << c.units.temperature;
  out << YAML::Key << "gamma" << YAML::Value << c.units.gamma;
  if (c.units.v0) out << YAML::Key << "v0" << YAML::Value << *c.units.v0;
  out << YAML::EndMap;

  out << YAML::Key << "potential" << YAML::Value << YAML::BeginSeq;
  for (const auto& h : c.potential)
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "k" << YAML::Value << h.k << YAML::Key << "cos"
        << YAML::Value << h.a << YAML::Key << "sin" << YAML::Value << h.b << YAML::EndMap;
  out << YAML::EndSeq;

  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "type" << YAML::Value << std::string(to_string(c.initial.kind));
  out << YAML::Key << "sigma" << YAML::Value << c.initial.sigma;
  out << YAML::Key << "alpha0" << YAML::Value << c.initial.alpha0;
  out << YAML::Key << "centers" << YAML::Value << YAML::Flow << c.initial.centers;
  out << YAML::Key << "m" << YAML::Value << c.initial.m;
  out << YAML::EndMap;

  out << YAML::Key << "generator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << std::string(to_string(c.generator.mode));
  out << YAML::Key << "representation" << YAML::Value << std::string(to_string(c.generator.representation));
  out << YAML::Key << "diffusion" << YAML::Value << c.generator.diffusion;
  out << YAML::EndMap;

  const auto& e = c.evolution;
  out << YAML::Key << "evolution" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "truncation" << YAML::Value << e.truncation;
  out << YAML::Key << "t_final" << YAML::Value << e.t_final;
  out << YAML::Key << "dt" << YAML::Value << e.dt;
  out << YAML::Key << "safety" << YAML::Value << e.safety;
  out << YAML::Key << "integrator" << YAML::Value << std::string(to_string(e.integrator));
  out << YAML::Key << "tolerance" << YAML::Value << e.tolerance;
  out << YAML::Key << "record_interval" << YAML::Value << e.record_interval;
  out << YAML::Key << "leakage_threshold" << YAML::Value << e.leakage_threshold;
  out << YAML::Key << "positivity_threshold" << YAML::Value << e.positivity_threshold;
  out << YAML::EndMap;

  const auto& o = c.outputs;
  out << YAML::Key << "outputs" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << o.directory;
  out << YAML::Key << "snapshot_times" << YAML::Value << YAML::Flow << o.snapshot_times;
  out << YAML::Key << "revival_fractions" << YAML::Value << YAML::Flow << o.revival_fractions;
  out << YAML::Key << "observables" << YAML::Value << YAML::Flow << o.observables;
  out << YAML::Key << "n_alpha" << YAML::Value << o.n_alpha;
  out << YAML::EndMap;

  out << YAML::Key << "steady" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tolerance" << YAML::Value << c.steady.tolerance;
  out << YAML::Key << "max_time" << YAML::Value << c.steady.max_time;
  out << YAML::EndMap;

  const auto& s = c.sweep;
  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "t_min" << YAML::Value << s.t_min;
  out << YAML::Key << "t_max" << YAML::Value << s.t_max;
  out << YAML::Key << "points" << YAML::Value << s.points;
  out << YAML::Key << "leakage_target" << YAML::Value << s.leakage_target;
  out << YAML::Key << "max_truncation" << YAML::Value << s.max_truncation;
  out << YAML::Key << "mid_window" << YAML::Value << YAML::Flow << std::vector<double>{s.mid_lo, s.mid_hi};
  out << YAML::Key << "high_window" << YAML::Value << YAML::Flow << std::vector<double>{s.high_lo, s.high_hi};
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace rotor
