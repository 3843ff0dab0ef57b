#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <optional>
#include <string>

#include "bmild/config.hpp"
#include "bmild/data.hpp"
#include "bmild/error.hpp"
#include "bmild/experiments.hpp"
#include "bmild/norms.hpp"
#include "bmild/solver.hpp"
#include "bmild/spectral.hpp"

namespace py = pybind11;
using namespace bmild;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Arrays are indexed a[x, y, z] for scalars and a[c, x, y, z] for vectors.
ScalarField scalar_from(const Array& a, double box_length) {
  if (a.ndim() != 3 || a.shape(0) != a.shape(1) || a.shape(1) != a.shape(2)) {
    throw FieldMismatch("expected a cubic (n, n, n) array");
  }
  const Grid3 g = make_grid(static_cast<int>(a.shape(0)), box_length);
  ScalarField f(g);
  const auto r = a.unchecked<3>();
  for (int iz = 0; iz < g.n(); ++iz)
    for (int iy = 0; iy < g.n(); ++iy)
      for (int ix = 0; ix < g.n(); ++ix) f.at(ix, iy, iz) = r(ix, iy, iz);
  return f;
}

VectorField vector_from(const Array& a, double box_length) {
  if (a.ndim() != 4 || a.shape(0) != 3) throw FieldMismatch("expected a (3, n, n, n) array");
  auto component = [&](int i) { return scalar_from(py::array(a[py::int_(i)]).cast<Array>(), box_length); };
  return VectorField(component(0), component(1), component(2));
}

Array to_array(const ScalarField& field) {
  const ScalarField f = to_real(field);
  const int n = f.grid().n();
  Array a({n, n, n});
  auto w = a.mutable_unchecked<3>();
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) w(ix, iy, iz) = f.at(ix, iy, iz);
  return a;
}

Array to_array(const VectorField& field) {
  const VectorField v = to_real(field);
  const int n = v.grid().n();
  Array a({3, n, n, n});
  auto w = a.mutable_unchecked<4>();
  for (int c = 0; c < 3; ++c)
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) w(c, ix, iy, iz) = v[c].at(ix, iy, iz);
  return a;
}

double norm_of(const Array& a, double p, double box_length, bool weak) {
  if (a.ndim() == 4) {
    const VectorField v = vector_from(a, box_length);
    return weak ? weak_lq_norm(v, p) : lp_norm(v, p);
  }
  const ScalarField f = scalar_from(a, box_length);
  return weak ? weak_lq_norm(f, p) : lp_norm(f, p);
}

py::dict report_dict(const PicardReport& r) {
  py::list residuals;
  py::list ratios;
  for (const auto& it : r.iterations) {
    residuals.append(it.residual);
    ratios.append(it.ratio);
  }
  py::dict d;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations.size();
  d["residuals"] = residuals;
  d["ratios"] = ratios;
  d["max_ratio"] = r.max_ratio;
  d["v0_norm"] = r.v0_norm;
  d["solution_norm"] = r.solution_norm;
  d["c0"] = r.c0;
  d["smallness_holds"] = r.smallness_holds;
  d["bound_holds"] = r.bound_holds;
  return d;
}

SolveConfig solve_config(double horizon, double dt, double p, double q, int max_iterations,
                         double eps_fix, const std::string& quadrature) {
  SolveConfig cfg;
  cfg.horizon = horizon;
  cfg.dt = dt;
  cfg.p = p;
  cfg.q = q;
  cfg.max_iterations = max_iterations;
  cfg.eps_fix = eps_fix;
  cfg.quadrature = parse_quadrature(quadrature);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_bmild, m) {
  m.doc() = "Mild solutions of the 3D Boussinesq system on a periodic box";

  // Translators run newest first, so the base class is registered before its subclasses.
  const auto& error = py::register_exception<Error>(m, "Error");
  py::register_exception<ContractionFailed>(m, "ContractionFailed", error.ptr());
  py::register_exception<BlowUp>(m, "BlowUp", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<KernelUnresolved>(m, "KernelUnresolved", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", error.ptr());
  py::register_exception<FieldMismatch>(m, "FieldMismatch", error.ptr());

  m.def("set_threads", &set_fft_threads, py::arg("threads"));

  m.def(
      "initial_data",
      [](int n, double box_length, const std::string& preset, double amplitude,
         double theta_amplitude, double length_scale, std::uint64_t seed, double lam) {
        DataSpec spec;
        spec.preset = parse_preset(preset);
        spec.amplitude = amplitude;
        spec.theta_amplitude = theta_amplitude;
        spec.length_scale = length_scale;
        spec.seed = seed;
        const InitialData d = make_initial_data(make_grid(n, box_length), spec, lam);
        return py::make_tuple(to_array(d.u), to_array(d.theta), d.u.grid().box_length());
      },
      py::arg("n"), py::arg("box_length"), py::arg("preset") = "gaussian",
      py::arg("amplitude") = 0.1, py::arg("theta_amplitude") = 0.1,
      py::arg("length_scale") = 1.0, py::arg("seed") = 0, py::arg("lam") = 1.0,
      "Returns (u, theta, box_length) with u of shape (3, n, n, n) and theta of shape (n, n, n).");

  m.def(
      "lp_norm", [](const Array& a, double p, double L) { return norm_of(a, p, L, false); },
      py::arg("field"), py::arg("p"), py::arg("box_length"));
  m.def(
      "weak_lq_norm", [](const Array& a, double q, double L) { return norm_of(a, q, L, true); },
      py::arg("field"), py::arg("q"), py::arg("box_length"));
  m.def(
      "heat",
      [](const Array& a, double t, double L) -> py::object {
        if (a.ndim() == 4) return to_array(heat_semigroup(vector_from(a, L), t));
        return to_array(heat_semigroup(scalar_from(a, L), t));
      },
      py::arg("field"), py::arg("t"), py::arg("box_length"));
  m.def(
      "leray", [](const Array& u, double L) { return to_array(leray_project(vector_from(u, L))); },
      py::arg("u"), py::arg("box_length"));
  m.def(
      "divergence",
      [](const Array& u, double L) { return to_array(divergence(vector_from(u, L))); },
      py::arg("u"), py::arg("box_length"));

  m.def(
      "solve",
      [](const Array& u0, const Array& theta0, double L, double T, double dt, double p, double q,
         int max_iterations, double eps_fix, const std::string& quadrature) {
        const SolveConfig cfg = solve_config(T, dt, p, q, max_iterations, eps_fix, quadrature);
        const Solution s = picard_solve(vector_from(u0, L), scalar_from(theta0, L), cfg);
        py::dict d = report_dict(s.report);
        d["u"] = to_array(s.trajectory.u.back());
        d["theta"] = to_array(s.trajectory.theta.back());
        d["times"] = [&] {
          py::list t;
          for (std::size_t j = 0; j < s.trajectory.size(); ++j) t.append(s.trajectory.time(j));
          return t;
        }();
        return d;
      },
      py::arg("u0"), py::arg("theta0"), py::arg("box_length"), py::arg("T") = 1.0,
      py::arg("dt") = 1.0 / 64.0, py::arg("p") = 4.0, py::arg("q") = 2.0,
      py::arg("max_iterations") = 50, py::arg("eps_fix") = 1e-8,
      py::arg("quadrature") = "exp_linear",
      "Picard iteration for the mild formulation; returns the report and the state at T.");

  m.def(
      "reference",
      [](const Array& u0, const Array& theta0, double L, double T, double dt) {
        SolveConfig cfg;
        cfg.horizon = T;
        cfg.dt = dt;
        const Trajectory r = solve_pde_reference(vector_from(u0, L), scalar_from(theta0, L), cfg);
        return py::make_tuple(to_array(r.u.back()), to_array(r.theta.back()));
      },
      py::arg("u0"), py::arg("theta0"), py::arg("box_length"), py::arg("T") = 1.0,
      py::arg("dt") = 1.0 / 64.0, "Integrating-factor RK4 reference state (u, theta) at T.");

  m.def("velocity_ladder", &velocity_ladder, py::arg("p"));
  m.def("temperature_ladder", &temperature_ladder, py::arg("p"), py::arg("q"));

  m.def(
      "config_hash", [](const std::string& path) { return load_config(path).hash(); },
      py::arg("path"));
  m.def(
      "run",
      [](const std::string& command, const std::string& config,
         const std::optional<std::string>& out, const std::optional<std::uint64_t>& seed) {
        ExperimentConfig cfg;
        try {
          cfg = load_config(config);
        } catch (const Error& e) {
          std::cerr << "error: " << e.what() << "\n";
          return static_cast<int>(kExitConfig);
        }
        if (out) cfg.out_dir = *out;
        if (seed) cfg.data.seed = *seed;
        py::gil_scoped_release release;
        return run_command(command, cfg, std::cout, std::cerr);
      },
      py::arg("command"), py::arg("config"), py::arg("out") = py::none(),
      py::arg("seed") = py::none(), "Runs a command like the CLI and returns its exit code.");
}
