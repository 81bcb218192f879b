#include "smartflow/bench.hpp"
#include "smartflow/config.hpp"
#include "smartflow/error.hpp"
#include "smartflow/exact.hpp"
#include "smartflow/selftest.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace smartflow;

namespace {

py::array_t<double> trajectory_array(const SpaceTimeFunction &f) {
  const std::size_t rows = f.values().size();
  const std::size_t cols = f.space()->num_dofs();
  py::array_t<double> out({rows, cols});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t m = 0; m < rows; ++m)
    for (std::size_t j = 0; j < cols; ++j)
      a(m, j) = f.values()[m].coefficients()[j];
  return out;
}

py::dict diagnostics_dict(const Diagnostics &d) {
  py::dict r;
  r["weak_modular"] = d.weak_modular;
  r["sup_modular"] = d.sup_modular;
  r["dtau_norm_sq"] = d.dtau_norm_sq;
  r["gamma_norm_sq"] = d.gamma_norm_sq;
  return r;
}

py::dict solve(const RunConfig &config) {
  config.validate();
  PeriodicSolveReport rep = [&] {
    py::gil_scoped_release release;
    if (config.problem == ProblemKind::FlowRate)
      return picard_periodic(build_flow_rate_problem(config), config.picard);
    return solve_pressure_periodic(build_pressure_problem(config), config.picard);
  }();
  const TimeGrid &grid = rep.trajectory.grid();
  std::vector<double> times;
  for (std::size_t m = 0; m <= grid.steps(); ++m)
    times.push_back(grid.node(m));
  py::dict r;
  r["converged"] = rep.converged;
  r["failure"] = rep.failure;
  r["picard_iterations"] = rep.picard_iterations;
  r["picard_residuals"] = rep.picard_residuals;
  r["times"] = times;
  r["x"] = rep.trajectory.space()->dof_coordinates();
  r["v"] = trajectory_array(rep.trajectory);
  r["gamma"] = rep.gamma.values();
  r["flux_defects"] = rep.flux_defects;
  r["diagnostics"] = diagnostics_dict(rep.diagnostics);
  return r;
}

py::dict convergence(const RunConfig &config, bool parallel) {
  config.validate();
  StudyConfig study = build_study(config);
  study.parallel = parallel;
  ErrorTable table = [&] {
    py::gil_scoped_release release;
    return run_convergence_study(study);
  }();
  py::list rows;
  for (const ErrorRecord &rec : table.records) {
    py::dict d;
    d["level"] = rec.level;
    d["h"] = rec.h;
    d["tau"] = rec.tau;
    d["err_linf_l2"] = rec.err_linf_l2;
    d["err_grad"] = rec.err_grad;
    d["err_gamma"] = rec.err_gamma;
    d["picard_iterations"] = rec.picard_iterations;
    d["converged"] = rec.converged;
    d["diagnostics"] = diagnostics_dict(rec.diagnostics);
    rows.append(d);
  }
  py::list eocs;
  for (const auto &e : table.eoc)
    eocs.append(py::make_tuple(e[0], e[1], e[2]));
  py::dict r;
  r["records"] = rows;
  r["eoc"] = eocs;
  return r;
}

py::list selftest(std::uint64_t seed, std::size_t samples, bool inject_fault) {
  SelftestOptions o;
  o.seed = seed;
  o.samples = samples;
  o.inject_sign_flip = inject_fault;
  std::vector<SuiteResult> results;
  {
    py::gil_scoped_release release;
    results = run_selftest(o);
  }
  py::list out;
  for (const SuiteResult &s : results) {
    py::dict d;
    d["name"] = s.name;
    d["passed"] = s.passed;
    d["samples"] = s.samples;
    d["failures"] = s.failures;
    d["worst"] = s.worst;
    d["detail"] = s.detail;
    out.append(d);
  }
  return out;
}

} // namespace

PYBIND11_MODULE(_smartflow, m) {
  m.doc() = "Time-periodic pulsatile flow of variable power-law fluids";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", base.ptr());

  py::class_<ExponentField>(m, "ExponentField")
      .def_static("constant", &ExponentField::constant, py::arg("value"))
      .def_static("piecewise", &ExponentField::piecewise, py::arg("breakpoints"),
                  py::arg("values"))
      .def_static(
          "affine",
          [](double c0, double c1, double left, double right) {
            return ExponentField::affine(c0, c1, Interval{left, right});
          },
          py::arg("c0"), py::arg("c1"), py::arg("left") = -1.0, py::arg("right") = 1.0)
      .def("__call__", &ExponentField::operator(), py::arg("x"))
      .def_property_readonly("p_minus", &ExponentField::p_minus)
      .def_property_readonly("p_plus", &ExponentField::p_plus)
      .def_property_readonly("breakpoints", &ExponentField::breakpoints);

  py::class_<StressModel>(m, "StressModel")
      .def(py::init<ExponentField, double>(), py::arg("exponent"), py::arg("delta") = 0.0)
      .def_property_readonly("delta", &StressModel::delta)
      .def("stress", &StressModel::stress, py::arg("x"), py::arg("a"))
      .def("viscosity", &StressModel::viscosity, py::arg("x"), py::arg("t"))
      .def("potential_v", &StressModel::potential_v, py::arg("x"), py::arg("t"))
      .def("potential_u", &StressModel::potential_u, py::arg("x"), py::arg("a"))
      .def("natural_f", &StressModel::natural_f, py::arg("x"), py::arg("a"));

  m.def(
      "womersley",
      [](double t, double x, double radius, int omega) {
        return womersley(WomersleyParams{radius, omega}, t, x);
      },
      py::arg("t"), py::arg("x"), py::arg("radius") = 1.0, py::arg("omega") = 1);
  m.def(
      "womersley_flowrate",
      [](double t, double radius, int omega) {
        return womersley_flowrate(WomersleyParams{radius, omega}, t);
      },
      py::arg("t"), py::arg("radius") = 1.0, py::arg("omega") = 1);
  m.def("steady_constant", &steady_constant, py::arg("p"), py::arg("radius"), py::arg("x"));
  m.def(
      "noneven_shift",
      [](double zeta, double p_left, double p_right, double radius) {
        return noneven_shift(SteadySpec::noneven(zeta, p_left, p_right, radius));
      },
      py::arg("zeta"), py::arg("p_left"), py::arg("p_right"), py::arg("radius") = 1.0);
  m.def(
      "steady_flowrate",
      [](const std::string &kind, const std::vector<double> &breakpoints,
         const std::vector<double> &exponents, double radius) {
        SteadySpec spec;
        if (kind == "constant" && exponents.size() == 1)
          spec = SteadySpec::constant(exponents[0], radius);
        else if (kind == "even")
          spec = SteadySpec::even(breakpoints, exponents, radius);
        else if (kind == "noneven" && breakpoints.size() == 1 && exponents.size() == 2)
          spec = SteadySpec::noneven(breakpoints[0], exponents[0], exponents[1], radius);
        else
          throw py::value_error("steady_flowrate: unsupported kind or sizes");
        return flowrate_of(steady_solution(spec), 0.0);
      },
      py::arg("kind"), py::arg("breakpoints"), py::arg("exponents"), py::arg("radius") = 1.0);

  py::class_<RunConfig>(m, "RunConfig")
      .def("__eq__", [](const RunConfig &a, const RunConfig &b) { return a == b; })
      .def("serialize", &serialize_config)
      .def("entries", &config_entries)
      .def("validate", &RunConfig::validate)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("steps", &RunConfig::steps)
      .def_readwrite("elements", &RunConfig::elements)
      .def_readwrite("first_level", &RunConfig::first_level)
      .def_readwrite("last_level", &RunConfig::last_level);

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("preset", &preset, py::arg("name"));
  m.def("preset_names", &preset_names);
  m.def("solve", &solve, py::arg("config"));
  m.def("convergence", &convergence, py::arg("config"), py::arg("parallel") = false);
  m.def("selftest", &selftest, py::arg("seed") = 0, py::arg("samples") = 1000,
        py::arg("inject_fault") = false);
  m.def("eoc", &eoc, py::arg("values"), py::arg("steps"));
}
