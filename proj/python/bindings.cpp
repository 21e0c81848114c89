#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "magsq/cli.hpp"
#include "magsq/config.hpp"
#include "magsq/dispersive_system.hpp"
#include "magsq/gaussian.hpp"
#include "magsq/linear_system.hpp"
#include "magsq/quantities.hpp"
#include "magsq/scenarios.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace magsq;

namespace {

nlohmann::json parse_json(const std::string& text) {
  if (text.empty()) return nlohmann::json::object();
  return nlohmann::json::parse(text);
}

py::dict trace_to_dict(const SqueezingTrace& t) {
  py::dict d;
  d["axis_name"] = t.axis_name;
  d["axis_unit"] = t.axis_unit;
  d["axis"] = t.axis;
  d["stable"] = t.stable;
  py::dict variances, squeezing, extra;
  for (std::size_t q = 0; q < t.quadratures.size(); ++q) {
    variances[py::str(t.quadratures[q])] = t.variances[q];
    squeezing[py::str(t.quadratures[q])] = t.squeezing[q];
  }
  for (const auto& e : t.extra) extra[py::str(e.name)] = e.values;
  d["variances"] = variances;
  d["squeezing"] = squeezing;
  d["extra"] = extra;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian simulation of magnon squeezing in optomagnomechanics";

  // Translators are tried newest first, so derived types register last.
  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto& config = py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());
  py::register_exception<StateError>(m, "StateError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", config.ptr());

  m.def("from_hz", &from_hz, "hz"_a);
  m.def("to_hz", &to_hz, "omega"_a);
  m.def("thermal_occupancy", &thermal_occupancy, "frequency"_a, "temperature"_a);
  m.def("power_from_coupling", &power_from_coupling, "coupling"_a, "g0"_a, "kappa_a"_a,
        "omega_b"_a, "drive_frequency"_a);
  m.def("optical_frequency", &optical_frequency, "wavelength"_a);
  m.def("squeezing_db", &squeezing_db, "variance"_a);
  m.def("variance_from_db", &variance_from_db, "db"_a);
  m.def("bogoliubov_params", [](double g_plus, double g_minus) {
    const auto b = bogoliubov_params(g_plus, g_minus);
    return py::make_tuple(b.r, b.g_tilde);
  }, "g_plus"_a, "g_minus"_a);
  m.def("hurwitz_margin", &hurwitz_margin, "drift"_a);
  m.def("solve_lyapunov", &solve_lyapunov, "drift"_a, "diffusion"_a);
  m.def("lyapunov_residual", &lyapunov_residual, "drift"_a, "cov"_a, "diffusion"_a);
  m.def("validate_state", [](const Matrix& cov) {
    const auto r = validate_state(GaussianState(Vector::Zero(cov.rows()), cov));
    return py::dict("symmetric"_a = r.symmetric, "physical"_a = r.physical,
                    "min_symplectic_eigenvalue"_a = r.min_symplectic_eigenvalue,
                    "min_uncertainty_eigenvalue"_a = r.min_uncertainty_eigenvalue);
  }, "cov"_a);

  py::class_<LinearOmmParams>(m, "LinearOmmParams")
      .def(py::init<>())
      .def_readwrite("wavelength", &LinearOmmParams::wavelength)
      .def_readwrite("omega_b", &LinearOmmParams::omega_b)
      .def_readwrite("omega_m", &LinearOmmParams::omega_m)
      .def_readwrite("kappa_a", &LinearOmmParams::kappa_a)
      .def_readwrite("kappa_m", &LinearOmmParams::kappa_m)
      .def_readwrite("gamma_b", &LinearOmmParams::gamma_b)
      .def_readwrite("g0", &LinearOmmParams::g0)
      .def_readwrite("g_m", &LinearOmmParams::g_m)
      .def_readwrite("temperature", &LinearOmmParams::temperature)
      .def("couplings", [](const LinearOmmParams& p) {
        const auto g = p.couplings();
        return py::make_tuple(g.plus, g.minus);
      })
      .def("with_ratio", &LinearOmmParams::with_ratio, "ratio"_a);

  py::class_<DispersiveOmmParams>(m, "DispersiveOmmParams")
      .def(py::init<>())
      .def_readwrite("wavelength", &DispersiveOmmParams::wavelength)
      .def_readwrite("omega_b", &DispersiveOmmParams::omega_b)
      .def_readwrite("omega_m", &DispersiveOmmParams::omega_m)
      .def_readwrite("kappa_a", &DispersiveOmmParams::kappa_a)
      .def_readwrite("kappa_m", &DispersiveOmmParams::kappa_m)
      .def_readwrite("gamma_b", &DispersiveOmmParams::gamma_b)
      .def_readwrite("g0", &DispersiveOmmParams::g0)
      .def_readwrite("g_m", &DispersiveOmmParams::g_m)
      .def_readwrite("delta_m", &DispersiveOmmParams::delta_m)
      .def_readwrite("temperature", &DispersiveOmmParams::temperature)
      .def("couplings", [](const DispersiveOmmParams& p) {
        const auto g = p.couplings();
        return py::make_tuple(g.plus, g.minus);
      })
      .def("with_ratio", &DispersiveOmmParams::with_ratio, "ratio"_a)
      .def("with_rabi", &DispersiveOmmParams::with_rabi, "rabi"_a);

  py::class_<ProtocolSchedule>(m, "ProtocolSchedule")
      .def(py::init<>())
      .def_readwrite("switch_off_phase", &ProtocolSchedule::switch_off_phase)
      .def_readwrite("interlude", &ProtocolSchedule::interlude)
      .def_readwrite("horizon", &ProtocolSchedule::horizon)
      .def_readwrite("sample_count", &ProtocolSchedule::sample_count);

  m.def("steady_state", [](const LinearOmmParams& p) {
    const auto r = steady_state(p);
    return py::dict("cov"_a = r.state.cov, "s_b"_a = r.s_b, "s_m"_a = r.s_m, "n_b"_a = r.n_b,
                    "margin"_a = r.margin, "r"_a = r.bogoliubov.r);
  }, "params"_a);
  m.def("optimal_ratio", [](const LinearOmmParams& p, double tol) {
    const auto o = optimal_ratio(p, tol);
    return py::make_tuple(o.ratio, o.value);
  }, "params"_a, "tolerance"_a = 1e-4);
  m.def("squeezing_vs_ratio", [](const LinearOmmParams& p, const std::vector<double>& ratios) {
    return trace_to_dict(squeezing_vs_ratio(p, ratios));
  }, "params"_a, "ratios"_a);
  m.def("step1_steady", [](const DispersiveOmmParams& p) {
    const auto r = step1_steady(p);
    return py::dict("cov"_a = r.state.cov, "s_b"_a = r.s_b, "n_b"_a = r.n_b,
                    "margin"_a = r.margin, "r"_a = r.bogoliubov.r);
  }, "params"_a);
  m.def("run_protocol", [](const DispersiveOmmParams& p, const ProtocolSchedule& s,
                           bool include_full) {
    ProtocolOptions options;
    options.include_full = include_full;
    ProtocolResult r;
    {
      py::gil_scoped_release release;
      r = run_protocol(p, s, options);
    }
    py::dict d("s_m_max"_a = r.s_m_max, "t_max"_a = r.t_max, "horizon"_a = r.horizon,
               "rabi"_a = r.rabi, "b0"_a = r.interlude.mean_b_end, "warnings"_a = r.warnings,
               "rwa"_a = trace_to_dict(r.rwa));
    if (r.full) {
      d["full"] = trace_to_dict(*r.full);
      d["s_m_max_full"] = *r.s_m_max_full;
    }
    return d;
  }, "params"_a, "schedule"_a = ProtocolSchedule{}, "include_full"_a = true);

  py::class_<ScenarioResult>(m, "ScenarioResult")
      .def_readonly("name", &ScenarioResult::name)
      .def_readonly("summary", &ScenarioResult::summary)
      .def_readonly("warnings", &ScenarioResult::warnings)
      .def_readonly("runtime_seconds", &ScenarioResult::runtime_seconds)
      .def_property_readonly("tables", [](const ScenarioResult& r) {
        py::dict d;
        for (const auto& t : r.tables) d[py::str(t.name)] = py::make_tuple(t.header, t.rows);
        return d;
      })
      .def_property_readonly("figures", [](const ScenarioResult& r) {
        py::dict d;
        for (const auto& f : r.figures) d[py::str(f.name)] = f.svg;
        return d;
      })
      .def("export", [](const ScenarioResult& r, const std::filesystem::path& dir) {
        std::vector<std::string> files;
        for (const auto& e : export_result(r, dir)) files.push_back(e.file);
        return files;
      }, "directory"_a);

  m.def("_run_scenario", [](const std::string& name, const std::string& overrides) {
    ScenarioSpec spec;
    spec.name = name;
    spec.overrides = parse_json(overrides);
    py::gil_scoped_release release;
    return run_scenario(spec);
  }, "name"_a, "overrides"_a = "");
  m.def("_sweep", [](const std::string& config, const std::string& path,
                     const std::vector<double>& grid, const std::string& metric) {
    const auto trace = sweep(parse_json(config), {path, grid, parse_metric(metric)});
    return trace_to_dict(trace);
  }, "config"_a, "path"_a, "grid"_a, "metric"_a = "steady");
  m.def("_validate_config", [](const std::string& config) {
    const Config cfg = parse_config(parse_json(config));
    check_physical(cfg);
    return to_string(cfg.kind);
  }, "config"_a);
  m.def("cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"magsq"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "args"_a);
}
