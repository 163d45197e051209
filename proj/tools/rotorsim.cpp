#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotor/acceptance.hpp"
#include "rotor/errors.hpp"
#include "rotor/scenario.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// A config argument is a file path, or the name of a pinned preset.
rotor::ScenarioConfig resolve(const std::string& arg) {
  if (fs::is_regular_file(arg)) return rotor::load_config(arg);
  const auto names = rotor::preset_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return rotor::parse_config(rotor::preset_text(arg));
  throw rotor::ConfigError("no config file or preset named '" + arg + "'");
}

int report(const rotor::RunOutcome& r) {
  (r.exit_code == 0 ? std::cout : std::cerr) << r.message << "\n";
  return r.exit_code;
}

template <class Run>
int guarded(Run&& run) {
  try {
    return run();
  } catch (const rotor::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return rotor::exit_config_error;
  } catch (const rotor::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return rotor::exit_numerical_abort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rotor::exit_failed_checks;
  }
}

json to_json(const rotor::CriterionReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j = {{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"passed", c.passed}};
    if (c.relation == "within") {
      j["target"] = c.target;
      j["tolerance"] = c.bound;
    } else {
      j["bound"] = c.bound;
    }
    checks.push_back(j);
  }
  json out = {{"criterion", r.id}, {"title", r.title}, {"passed", r.passed()}, {"seconds", r.seconds}, {"checks", checks}};
  if (!r.error.empty()) out["error"] = r.error;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open quantum rotor simulator: thermalization of a planar rotor in phase space"};
  app.require_subcommand(1);

  std::string config_arg, out_dir, run_dir, preset_name;
  int workers = 0;
  bool plots = false, list = false;
  std::vector<int> only;
  std::string json_path;

  auto* evolve = app.add_subcommand("evolve", "Time evolution from a config file or preset");
  auto* steady = app.add_subcommand("steady", "Steady state and its distance to the Gibbs state");
  auto* sweep = app.add_subcommand("sweep-temperature", "Steady-state vs Gibbs distance across temperature");
  for (auto* sub : {evolve, steady, sweep}) {
    sub->add_option("config", config_arg, "YAML config file or preset name")->required();
    sub->add_option("-o,--out", out_dir, "Output directory (overrides outputs.directory)");
    sub->add_flag("--plots", plots, "Also emit plot scripts");
  }
  sweep->add_option("-w,--workers", workers, "Worker threads (default: ROTOR_WORKERS or all cores)");

  auto* checks = app.add_subcommand("oracle-checks", "Run the acceptance suite and print a JSON report");
  checks->add_option("--only", only, "Criterion ids to run");
  checks->add_option("--json", json_path, "Also write the report to this file");
  checks->add_option("-w,--workers", workers, "Worker threads for the sweep criterion");

  auto* emit = app.add_subcommand("emit-plots", "Write matplotlib scripts for a finished run");
  emit->add_option("dir", run_dir, "Run directory")->required();

  auto* preset = app.add_subcommand("preset", "Print a pinned preset config");
  preset->add_option("name", preset_name, "Preset name");
  preset->add_flag("-l,--list", list, "List preset names");

  CLI11_PARSE(app, argc, argv);

  const std::optional<fs::path> out = out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir);

  auto run_with_plots = [&](const rotor::RunOutcome& r) {
    const int code = report(r);
    if (code == 0 && plots)
      for (const auto& p : rotor::emit_plots(r.directory)) std::cout << p.string() << "\n";
    return code;
  };

  if (*evolve) return guarded([&] { return run_with_plots(rotor::run_evolve(resolve(config_arg), out)); });
  if (*steady) return guarded([&] { return run_with_plots(rotor::run_steady(resolve(config_arg), out)); });
  if (*sweep)
    return guarded([&] { return run_with_plots(rotor::run_sweep_temperature(resolve(config_arg), out, workers)); });

  if (*checks) {
    return guarded([&] {
      rotor::AcceptanceOptions opts;
      opts.only = only;
      opts.workers = workers;
      opts.on_report = [](const rotor::CriterionReport& r) {
        std::fprintf(stderr, "%s criterion %d: %s (%.1f s)\n", r.passed() ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
      };
      const auto reports = rotor::run_acceptance(opts);
      json doc = {{"criteria", json::array()}, {"passed", true}};
      for (const auto& r : reports) {
        doc["criteria"].push_back(to_json(r));
        if (!r.passed()) doc["passed"] = false;
      }
      const std::string text = doc.dump(2);
      std::cout << text << "\n";
      if (!json_path.empty()) std::ofstream(json_path) << text << "\n";
      return doc["passed"].get<bool>() ? 0 : rotor::exit_failed_checks;
    });
  }

  if (*emit) {
    return guarded([&] {
      for (const auto& p : rotor::emit_plots(run_dir)) std::cout << p.string() << "\n";
      return 0;
    });
  }

  if (*preset) {
    return guarded([&] {
      if (list || preset_name.empty()) {
        for (const auto& n : rotor::preset_names()) std::cout << n << "\n";
        return 0;
      }
      std::cout << rotor::preset_text(preset_name);
      return 0;
    });
  }
  return 0;
}
