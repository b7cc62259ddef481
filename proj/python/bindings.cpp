#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resfluor/atom_dynamics.hpp"
#include "resfluor/config.hpp"
#include "resfluor/error.hpp"
#include "resfluor/experiment.hpp"
#include "resfluor/geometry.hpp"
#include "resfluor/ion_trap.hpp"
#include "resfluor/oracle.hpp"
#include "resfluor/output.hpp"
#include "resfluor/witness.hpp"

namespace py = pybind11;
using namespace resfluor;

namespace {

ExperimentConfig config_from(const std::string& text, std::optional<std::uint64_t> seed) {
  auto cfg = parse_config(text);
  if (seed) cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-level-atom fluorescence: steady states, field-moment minors, ion-trap jitter";

  py::register_exception<Error>(m, "ResfluorError", PyExc_ValueError);

  py::class_<AtomParameters>(m, "AtomParameters")
      .def(py::init([](double gamma1, double gamma2, double rabi, double detuning) {
             AtomParameters p{gamma1, gamma2, rabi, detuning};
             p.validate();
             return p;
           }),
           py::arg("gamma1") = 1.0, py::arg("gamma2") = 0.5, py::arg("rabi") = 0.0, py::arg("detuning") = 0.0)
      .def_readwrite("gamma1", &AtomParameters::gamma1)
      .def_readwrite("gamma2", &AtomParameters::gamma2)
      .def_readwrite("rabi", &AtomParameters::rabi)
      .def_readwrite("detuning", &AtomParameters::detuning);

  py::class_<AtomicSteadyState>(m, "AtomicSteadyState")
      .def(py::init([](double s22, std::complex<double> s21) { return AtomicSteadyState{s22, s21}; }),
           py::arg("sigma22"), py::arg("sigma21"))
      .def_readonly("sigma22", &AtomicSteadyState::sigma22)
      .def_readonly("sigma21", &AtomicSteadyState::sigma21)
      .def("coherence_sq", &AtomicSteadyState::coherence_sq)
      .def("__repr__", [](const AtomicSteadyState& s) {
        return "AtomicSteadyState(sigma22=" + std::to_string(s.sigma22) + ", sigma21=(" +
               std::to_string(s.sigma21.real()) + "," + std::to_string(s.sigma21.imag()) + "))";
      });

  m.def("steady_state", &steady_state, py::arg("params"));
  m.def("coherence_ratio", &coherence_ratio, py::arg("params"));
  m.def("rabi_for_ratio", &rabi_for_ratio, py::arg("target_ratio"), py::arg("gamma1") = 1.0,
        py::arg("gamma2") = 0.5, py::arg("detuning") = 0.0);
  m.def("state_for_ratio", &state_for_ratio, py::arg("target_ratio"), py::arg("gamma2") = 0.5,
        py::arg("detuning") = 0.0);
  m.def("entanglement_rabi_bound", &entanglement_rabi_bound, py::arg("n_atoms"), py::arg("gamma1") = 1.0,
        py::arg("gamma2") = 0.5, py::arg("detuning") = 0.0);

  m.def(
      "chain_minor",
      [](int n, double spacing, double phi2, const AtomicSteadyState& state) {
        const auto eval = minor_mu(linear_chain_scene(n, spacing, phi2), state);
        return py::dict(py::arg("mu") = eval.mu_full, py::arg("mu_normalized") = eval.mu_normalized,
                        py::arg("entangled") = eval.entangled);
      },
      py::arg("n_atoms"), py::arg("spacing"), py::arg("phi2"), py::arg("state"),
      "Minor for a chain along z with detector 2 at azimuth phi2.");
  m.def(
      "oracle_chain_minor",
      [](int n, double spacing, double phi2, const AtomicSteadyState& state) {
        return oracle::oracle_minor(oracle::build_joint_state(state, n), linear_chain_scene(n, spacing, phi2));
      },
      py::arg("n_atoms"), py::arg("spacing"), py::arg("phi2"), py::arg("state"));

  m.def("equilibrium_positions", &equilibrium_positions, py::arg("n_ions"));
  m.def(
      "position_uncertainty",
      [](double gamma_lambda) {
        const auto dz = position_uncertainty(gamma_lambda, IonSpecies::mercury());
        return py::make_tuple(dz.meters, dz.lambda);
      },
      py::arg("gamma_lambda"), "Mercury-ion spread (meters, wavelengths) at trap scale gamma.");
  m.def(
      "max_scale", [](double cap) { return max_scale(IonSpecies::mercury(), cap); },
      py::arg("jitter_cap_lambda") = 0.1);

  // experiment runner: configs are passed as `key = value` text
  m.def(
      "resolved_config", [](const std::string& text) { return config_from(text, std::nullopt).resolved(); },
      py::arg("config") = "");
  m.def(
      "scan_angle",
      [](const std::string& text, bool verify) {
        const auto cfg = config_from(text, std::nullopt);
        AngleScan scan;
        {
          py::gil_scoped_release release;
          scan = run_angle_scan(cfg, verify);
        }
        py::dict curves;
        for (std::size_t i = 0; i < scan.n_atoms.size(); ++i) curves[py::int_(scan.n_atoms[i])] = scan.mu_normalized[i];
        return py::make_tuple(scan.phi2, curves);
      },
      py::arg("config") = "", py::arg("verify") = false);
  m.def(
      "run_experiment",
      [](const std::string& kind, const std::string& text, std::optional<std::uint64_t> seed,
         unsigned workers, const std::string& format) {
        const auto cfg = config_from(text, seed);
        Table t;
        if (kind == "scan-angle") t = angle_scan_table(run_angle_scan(cfg));
        else if (kind == "threshold") t = threshold_table(run_threshold_map(cfg));
        else if (kind == "optimize") {
          std::vector<ScaleOptimum> rows;
          for (int n : cfg.n_atoms) rows.push_back(optimize_scale(cfg, n));
          t = optimum_table(rows);
        } else if (kind == "mc") {
          std::vector<McReport> rows;
          for (int n : cfg.n_atoms) rows.push_back(run_monte_carlo(cfg, n, workers));
          t = monte_carlo_table(rows);
        } else if (kind == "random") {
          std::vector<RandomEnsembleReport> rows;
          for (int n : cfg.n_atoms) rows.push_back(run_random_ensemble(cfg, n, workers));
          t = random_table(rows);
        } else {
          throw Error(ErrorCode::ConfigInvalid, "unknown experiment " + kind);
        }
        return render(t, cfg, format == "csv" ? Format::Csv : Format::Json);
      },
      py::arg("kind"), py::arg("config") = "", py::arg("seed") = std::nullopt, py::arg("workers") = 1,
      py::arg("format") = "json", py::call_guard<py::gil_scoped_release>(),
      "Runs one experiment and returns the rendered CSV or JSON text.");
}
