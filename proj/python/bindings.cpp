#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rotor/acceptance.hpp"
#include "rotor/classical_fp.hpp"
#include "rotor/errors.hpp"
#include "rotor/metrics.hpp"
#include "rotor/operators.hpp"
#include "rotor/oracles.hpp"
#include "rotor/propagator.hpp"
#include "rotor/scenario.hpp"
#include "rotor/sweep.hpp"

namespace py = pybind11;
using namespace rotor;

namespace {

py::dict series_dict(const ObservableSeries& s) {
  py::dict d;
  d["t"] = s.t;
  d["trace"] = s.trace;
  d["mean_p"] = s.mean_p;
  d["mean_p2"] = s.mean_p2;
  d["energy"] = s.energy;
  d["purity"] = s.purity;
  d["min_wigner"] = s.min_wigner;
  d["leakage"] = s.leakage;
  d["min_eigenvalue"] = s.min_eigenvalue;
  d["distance_to_reference"] = s.distance_to_reference;
  return d;
}

// (n_alpha, 2M+1) array with rows over the angle grid
py::array_t<double> wigner_array(const FullWigner& w) {
  py::array_t<double> out({w.n_alpha, w.dim()});
  std::copy(w.values.begin(), w.values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dissipative quantum rotor: states, generators, propagation and reference solutions";
  m.attr("__version__") = "0.1.0";

  auto base = py::register_exception<Error>(m, "RotorError", PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
  py::register_exception<AliasingError>(m, "AliasingError", base.ptr());
  py::register_exception<RepresentationError>(m, "RepresentationError", base.ptr());
  py::register_exception<NumericalAbort>(m, "NumericalAbort", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<Harmonic>(m, "Harmonic")
      .def(py::init([](int k, double a, double b) { return Harmonic{k, a, b}; }), py::arg("k"), py::arg("cos") = 0.0,
           py::arg("sin") = 0.0, "V_k(alpha) = cos * cos(k alpha) + sin * sin(k alpha)")
      .def_readwrite("k", &Harmonic::k)
      .def_readwrite("cos", &Harmonic::a)
      .def_readwrite("sin", &Harmonic::b);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def(py::init<>())
      .def(py::init<std::vector<Harmonic>, double>(), py::arg("terms"), py::arg("v0") = 1.0)
      .def_static("double_well", &PotentialSpec::double_well, py::arg("v0"))
      .def_property_readonly("terms", &PotentialSpec::terms)
      .def_property_readonly("v0", &PotentialSpec::v0)
      .def("value", &PotentialSpec::value)
      .def("derivative", &PotentialSpec::derivative)
      .def("scaled", &PotentialSpec::scaled);

  py::class_<BathParams>(m, "BathParams")
      .def(py::init<double, double, double, double>(), py::arg("temperature"), py::arg("gamma"),
           py::arg("hbar") = 1.0, py::arg("inertia") = 1.0)
      .def_property_readonly("temperature", &BathParams::temperature)
      .def_property_readonly("gamma", &BathParams::gamma)
      .def_property_readonly("hbar", &BathParams::hbar)
      .def_property_readonly("inertia", &BathParams::inertia)
      .def_property_readonly("diffusion", &BathParams::diffusion)
      .def_property_readonly("epsilon1", &BathParams::epsilon1)
      .def("epsilon2", &BathParams::epsilon2);

  py::class_<Scaling>(m, "Scaling")
      .def(py::init<double>(), py::arg("hbar_tilde"))
      .def_property_readonly("hbar_tilde", &Scaling::hbar_tilde)
      .def_property_readonly("v0", &Scaling::v0)
      .def("time", &Scaling::time)
      .def("time_tilde", &Scaling::time_tilde)
      .def("temperature", &Scaling::temperature)
      .def("rate", &Scaling::rate)
      .def("bath", &Scaling::bath, py::arg("temperature_tilde"), py::arg("gamma_tilde"))
      .def("potential", &Scaling::potential, py::arg("terms_in_v0"));

  m.def("revival_time", &revival_time, py::arg("hbar") = 1.0, py::arg("inertia") = 1.0);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<int, Matrix>(), py::arg("truncation"), py::arg("values"))
      .def_static("momentum_eigenstate", &DensityMatrix::momentum_eigenstate)
      .def_static("maximally_mixed", &DensityMatrix::maximally_mixed)
      .def_property_readonly("truncation", &DensityMatrix::truncation)
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def_property_readonly("matrix", &DensityMatrix::matrix)
      .def("__call__", &DensityMatrix::operator(), py::arg("m1"), py::arg("m2"))
      .def("trace", &DensityMatrix::trace)
      .def("purity", &DensityMatrix::purity)
      .def("min_eigenvalue", &DensityMatrix::min_eigenvalue)
      .def("boundary_population", &DensityMatrix::boundary_population)
      .def("mean_momentum", &DensityMatrix::mean_momentum, py::arg("hbar") = 1.0)
      .def("mean_momentum_squared", &DensityMatrix::mean_momentum_squared, py::arg("hbar") = 1.0)
      .def("padded", &DensityMatrix::padded);

  m.def("wavepacket", &build_wavepacket, py::arg("sigma"), py::arg("alpha0"), py::arg("truncation"));
  m.def("angle_grid", &angle_grid, py::arg("n_alpha"));
  m.def(
      "wigner", [](const DensityMatrix& rho, int n_alpha) { return wigner_array(full_wigner(rho, n_alpha)); },
      py::arg("rho"), py::arg("n_alpha"),
      "Full Wigner function on angle_grid(n_alpha) x integer m, shape (n_alpha, 2M+1).");
  m.def("trace_distance", &trace_distance);
  m.def("fidelity", &fidelity);
  m.def("long_range_coherence", &long_range_coherence, py::arg("rho"), py::arg("min_separation"),
        py::arg("n_alpha"));

  py::enum_<GeneratorMode>(m, "GeneratorMode")
      .value("full", GeneratorMode::full)
      .value("unitary_only", GeneratorMode::unitary_only)
      .value("diffusion_only", GeneratorMode::diffusion_only)
      .value("no_angular_diffusion", GeneratorMode::no_angular_diffusion);
  py::enum_<Representation>(m, "Representation")
      .value("matrix", Representation::matrix)
      .value("aux_wigner", Representation::aux_wigner);
  py::enum_<Integrator>(m, "Integrator")
      .value("rk4_fixed", Integrator::rk4_fixed)
      .value("rk4_adaptive", Integrator::rk4_adaptive);

  py::class_<GeneratorSpec>(m, "GeneratorSpec")
      .def(py::init([](const BathParams& bath, const PotentialSpec& potential, GeneratorMode mode,
                       Representation representation, double frictionless_diffusion) {
             GeneratorSpec s;
             s.bath = bath;
             s.potential = potential;
             s.mode = mode;
             s.representation = representation;
             s.frictionless_diffusion = frictionless_diffusion;
             return s;
           }),
           py::arg("bath"), py::arg("potential") = PotentialSpec{}, py::arg("mode") = GeneratorMode::full,
           py::arg("representation") = Representation::aux_wigner, py::arg("frictionless_diffusion") = 0.0)
      .def_readwrite("bath", &GeneratorSpec::bath)
      .def_readwrite("potential", &GeneratorSpec::potential)
      .def_readwrite("mode", &GeneratorSpec::mode)
      .def_readwrite("representation", &GeneratorSpec::representation)
      .def_readwrite("frictionless_diffusion", &GeneratorSpec::frictionless_diffusion)
      .def("momentum_diffusion", &GeneratorSpec::momentum_diffusion)
      .def("friction", &GeneratorSpec::friction)
      .def("angular_diffusion", &GeneratorSpec::angular_diffusion);

  m.def(
      "apply_generator",
      [](const GeneratorSpec& spec, const DensityMatrix& rho) { return Generator(spec, rho.truncation())(rho); },
      py::arg("spec"), py::arg("rho"), "Time derivative of rho under the generator.");
  m.def("gibbs_state", &gibbs_state, py::arg("potential"), py::arg("bath"), py::arg("truncation"),
        py::arg("boundary_tolerance") = 1e-10);
  m.def("gibbs_truncation", &gibbs_truncation, py::arg("potential"), py::arg("bath"),
        py::arg("boundary_tolerance"), py::arg("minimum") = 8, py::arg("maximum") = 512);

  py::class_<EvolutionConfig>(m, "EvolutionConfig")
      .def(py::init<>())
      .def_readwrite("dt", &EvolutionConfig::dt)
      .def_readwrite("t_final", &EvolutionConfig::t_final)
      .def_readwrite("snapshot_times", &EvolutionConfig::snapshot_times)
      .def_readwrite("integrator", &EvolutionConfig::integrator)
      .def_readwrite("tolerance", &EvolutionConfig::tolerance)
      .def_readwrite("n_alpha", &EvolutionConfig::n_alpha)
      .def_readwrite("record_interval", &EvolutionConfig::record_interval)
      .def_readwrite("leakage_threshold", &EvolutionConfig::leakage_threshold)
      .def_readwrite("abort_on_leakage", &EvolutionConfig::abort_on_leakage)
      .def_readwrite("positivity_threshold", &EvolutionConfig::positivity_threshold)
      .def_readwrite("check_positivity", &EvolutionConfig::check_positivity)
      .def_readwrite("track_wigner_min", &EvolutionConfig::track_wigner_min)
      .def_readwrite("reference", &EvolutionConfig::reference);

  py::class_<EvolutionResult>(m, "EvolutionResult")
      .def_readonly("final_state", &EvolutionResult::final_state)
      .def_property_readonly("series", [](const EvolutionResult& r) { return series_dict(r.series); })
      .def_property_readonly("snapshots",
                             [](const EvolutionResult& r) {
                               py::list out;
                               for (const auto& s : r.snapshots) out.append(py::make_tuple(s.t, s.rho));
                               return out;
                             })
      .def_readonly("steps", &EvolutionResult::steps)
      .def_readonly("rejected_steps", &EvolutionResult::rejected_steps)
      .def_readonly("max_leakage", &EvolutionResult::max_leakage)
      .def_readonly("min_eigenvalue", &EvolutionResult::min_eigenvalue)
      .def_readonly("max_trace_drift", &EvolutionResult::max_trace_drift);

  m.def("evolve", &evolve, py::arg("initial"), py::arg("spec"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("suggested_step", &suggested_step, py::arg("spec"), py::arg("truncation"), py::arg("safety") = 0.1);

  py::class_<SteadyStateResult>(m, "SteadyStateResult")
      .def_readonly("state", &SteadyStateResult::state)
      .def_readonly("time", &SteadyStateResult::time)
      .def_readonly("residual", &SteadyStateResult::residual)
      .def_readonly("raw_residual", &SteadyStateResult::raw_residual)
      .def_readonly("leakage_rate", &SteadyStateResult::leakage_rate);
  m.def(
      "steady_state",
      [](const GeneratorSpec& spec, const DensityMatrix& seed, double tolerance, double max_time) {
        SteadyStateConfig cfg;
        cfg.tolerance = tolerance;
        cfg.max_time = max_time;
        return find_steady_state(spec, seed, cfg);
      },
      py::arg("spec"), py::arg("seed"), py::arg("tolerance") = 1e-9, py::arg("max_time") = 1e5,
      py::call_guard<py::gil_scoped_release>());

  py::class_<KernelTable>(m, "KernelTable")
      .def_readonly("winding_cutoff", &KernelTable::winding_cutoff)
      .def_readonly("max_harmonic", &KernelTable::max_harmonic)
      .def_readonly("alpha", &KernelTable::alpha)
      .def_readonly("values", &KernelTable::values)
      .def("coefficient", &KernelTable::coefficient)
      .def("normalization", &KernelTable::normalization)
      .def("normalization_quadrature", &KernelTable::normalization_quadrature);
  m.def("diffusion_kernel", [](double t, double diffusion, int max_harmonic, int n_alpha, double hbar,
                               double inertia) {
    return diffusion_kernel(t, diffusion, max_harmonic, n_alpha, hbar, inertia);
  }, py::arg("t"), py::arg("diffusion"), py::arg("max_harmonic"), py::arg("n_alpha"), py::arg("hbar") = 1.0,
        py::arg("inertia") = 1.0);
  m.def("free_equilibrium", &free_equilibrium_exact, py::arg("temperature"), py::arg("hbar"), py::arg("inertia"),
        py::arg("truncation"));

  py::class_<GibbsResidual>(m, "GibbsResidual")
      .def_readonly("residual", &GibbsResidual::residual)
      .def_readonly("epsilon1", &GibbsResidual::epsilon1)
      .def_readonly("epsilon2", &GibbsResidual::epsilon2)
      .def_readonly("predicted_leading", &GibbsResidual::predicted_leading)
      .def_readonly("potential_part", &GibbsResidual::potential_part);
  m.def("gibbs_residual", &gibbs_residual, py::arg("potential"), py::arg("bath"), py::arg("truncation"));

  m.def("half_integer_weight", &half_integer_weight, py::arg("rho"), py::arg("n_alpha"));
  m.def(
      "classical_stationarity",
      [](const PotentialSpec& potential, const BathParams& bath, int n_alpha, int n_p) {
        const auto grid = ClassicalGrid::thermal(n_alpha, n_p, bath.temperature(), bath.inertia());
        return stationarity_residual(classical_gibbs(grid, potential, bath.temperature(), bath.inertia()),
                                     FpParams::thermal(potential, bath));
      },
      py::arg("potential"), py::arg("bath"), py::arg("n_alpha"), py::arg("n_p"),
      "Relative Fokker-Planck residual of the classical Gibbs density.");

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("temperature_tilde", &SweepPoint::temperature_tilde)
      .def_readonly("d1", &SweepPoint::d1)
      .def_readonly("epsilon1", &SweepPoint::epsilon1)
      .def_readonly("epsilon2", &SweepPoint::epsilon2)
      .def_readonly("truncation", &SweepPoint::truncation)
      .def_readonly("boundary_population", &SweepPoint::boundary_population)
      .def_readonly("residual", &SweepPoint::residual)
      .def_readonly("ok", &SweepPoint::ok)
      .def_readonly("error", &SweepPoint::error);
  m.def(
      "sweep_point",
      [](double temperature_tilde, double hbar_tilde, double gamma_tilde, std::vector<Harmonic> potential,
         double leakage_target, int max_truncation) {
        SweepConfig cfg;
        cfg.hbar_tilde = hbar_tilde;
        cfg.gamma_tilde = gamma_tilde;
        cfg.potential = std::move(potential);
        cfg.leakage_target = leakage_target;
        cfg.max_truncation = max_truncation;
        return sweep_point(cfg, temperature_tilde);
      },
      py::arg("temperature_tilde"), py::arg("hbar_tilde") = 1.0, py::arg("gamma_tilde") = 1.0,
      py::arg("potential") = std::vector<Harmonic>{{1, 1.0, 0.0}, {2, -1.0, 0.0}}, py::arg("leakage_target") = 1e-8,
      py::arg("max_truncation") = 192, py::call_guard<py::gil_scoped_release>(),
      "Steady state against Gibbs at one scaled temperature. Potential coefficients are in V0.");

  m.def("preset_names", &preset_names);
  m.def("preset_text", &preset_text, py::arg("name"));
  m.def(
      "validate_config", [](const std::string& text) { return to_yaml(parse_config(text)); }, py::arg("yaml_text"),
      "Parse, validate and return the normalised YAML.");
  m.def(
      "run_scenario",
      [](const std::string& yaml_text, const std::filesystem::path& out) {
        const auto cfg = parse_config(yaml_text);
        RunOutcome r;
        {
          py::gil_scoped_release release;
          r = run_scenario(cfg, out);
        }
        return py::make_tuple(r.exit_code, r.message);
      },
      py::arg("yaml_text"), py::arg("out"), "Run a config and write its artifacts; returns (exit_code, message).");
  m.def(
      "emit_plots",
      [](const std::filesystem::path& dir) {
        std::vector<std::string> out;
        for (const auto& p : emit_plots(dir)) out.push_back(p.string());
        return out;
      },
      py::arg("run_directory"));

  m.def(
      "run_acceptance",
      [](std::vector<int> only) {
        AcceptanceOptions opt;
        opt.only = std::move(only);
        std::vector<CriterionReport> reports;
        {
          py::gil_scoped_release release;
          reports = rotor::run_acceptance(opt);
        }
        py::list out;
        for (const auto& r : reports) {
          py::list checks;
          for (const auto& c : r.checks) {
            py::dict d;
            d["name"] = c.name;
            d["value"] = c.value;
            d["relation"] = c.relation;
            d["bound"] = c.bound;
            d["passed"] = c.passed;
            checks.append(d);
          }
          py::dict d;
          d["id"] = r.id;
          d["title"] = r.title;
          d["passed"] = r.passed();
          d["error"] = r.error;
          d["seconds"] = r.seconds;
          d["checks"] = checks;
          out.append(d);
        }
        return out;
      },
      py::arg("only") = std::vector<int>{}, "Runs the selected acceptance criteria (all when empty).");
}
