#include "bmild/duhamel.hpp"

#include <cmath>
#include <iostream>

#include "bmild/error.hpp"
#include "bmild/norms.hpp"
#include "bmild/spectral.hpp"

namespace bmild {

std::string to_string(Quadrature q) {
  return q == Quadrature::exp_linear ? "exp_linear" : "left_endpoint";
}

Quadrature parse_quadrature(const std::string& name) {
  if (name == "exp_linear") return Quadrature::exp_linear;
  if (name == "left_endpoint") return Quadrature::left_endpoint;
  throw ConfigError("unknown quadrature '" + name + "' (expected exp_linear or left_endpoint)");
}

std::string describe(Quadrature q) {
  if (q == Quadrature::exp_linear) {
    return "exponential product integration, forcing linear in s on each step, exact per mode";
  }
  return "exponential Euler, forcing frozen at the start of each step, exact per mode";
}

double exp_moment(int m, double z) {
  if (m < 0 || m > 2) throw std::out_of_range("exp_moment supports m = 0, 1, 2");
  if (z < 1.0) {
    double term = 1.0;  // (-z)^k / k!
    double sum = 0.0;
    for (int k = 0; k < 30; ++k) {
      sum += term / (m + k + 1);
      term *= -z / (k + 1);
    }
    return sum;
  }
  const double e = std::exp(-z);
  switch (m) {
    case 0: return (1.0 - e) / z;
    case 1: return (1.0 - e * (1.0 + z)) / (z * z);
    default: return (2.0 - e * (z * z + 2.0 * z + 2.0)) / (z * z * z);
  }
}

DuhamelQuadrature::DuhamelQuadrature(const Grid3& grid, double dt, Quadrature variant)
    : grid_(grid), dt_(dt), variant_(variant) {
  if (!(dt > 0.0)) throw ConfigError("quadrature step must be positive");
  const std::size_t size = grid.spectral_size();
  decay_.resize(size);
  left_.resize(size);
  right_.resize(size);
  left_w_.resize(size);
  right_w_.resize(size);
  const double h = dt;
  for_each_mode(grid, [&](std::size_t idx, int ix, int iy, int iz) {
    const double z = wavevector(grid, ix, iy, iz).k2 * h;
    const double e = std::exp(-z);
    decay_[idx] = e;
    if (variant == Quadrature::exp_linear) {
      const double i0 = exp_moment(0, z);
      const double i1 = exp_moment(1, z);
      const double i2 = exp_moment(2, z);
      left_[idx] = h * i1;
      right_[idx] = h * (i0 - i1);
      left_w_[idx] = h * h * i2;
      right_w_[idx] = h * h * (i1 - i2);
    } else {
      left_[idx] = h * exp_moment(0, z);
      right_[idx] = 0.0;
      left_w_[idx] = h * h * exp_moment(1, z);
      right_w_[idx] = 0.0;
    }
  });
}

std::vector<ScalarField> DuhamelQuadrature::integrate(const std::vector<ScalarField>& forcing,
                                                      bool weighted) const {
  if (forcing.size() < 2) throw ConfigError("quadrature needs at least two forcing samples");
  std::vector<ScalarField> out;
  out.reserve(forcing.size());
  out.emplace_back(grid_, Representation::spectral);
  ScalarField running(grid_, Representation::spectral);
  ScalarField running_w(grid_, Representation::spectral);
  auto acc = running.modes();
  auto acc_w = running_w.modes();
  const std::size_t size = acc.size();
  for (std::size_t i = 0; i + 1 < forcing.size(); ++i) {
    const ScalarField g0 = to_spectral(forcing[i]);
    const ScalarField g1 = to_spectral(forcing[i + 1]);
    require_same_grid(grid_, g0.grid(), "Duhamel quadrature");
    const auto a = g0.modes();
    const auto b = g1.modes();
    if (weighted) {
      // J_{i+1} = E (J_i + h I_i) + last step, uses I_i before its update.
      for (std::size_t k = 0; k < size; ++k) {
        acc_w[k] = decay_[k] * (acc_w[k] + dt_ * acc[k]) + left_w_[k] * a[k] + right_w_[k] * b[k];
      }
    }
    for (std::size_t k = 0; k < size; ++k) {
      acc[k] = decay_[k] * acc[k] + left_[k] * a[k] + right_[k] * b[k];
    }
    out.push_back(weighted ? running_w : running);
  }
  return out;
}

VectorField ensure_solenoidal(const VectorField& u0) {
  const double size = lp_norm(u0, 2.0);
  if (size == 0.0) {
    VectorField out = u0;
    out.divergence_free = true;
    return out;
  }
  const double div = lp_norm(divergence(u0), 2.0);
  if (div <= 1e-10 * size) {
    VectorField out = u0;
    out.divergence_free = true;
    return out;
  }
  std::clog << "warning: initial velocity is not divergence-free (||div u0||_2/||u0||_2 = "
            << div / size << "); applying the Leray projector\n";
  return leray_project(u0);
}

namespace {

VectorField vertical(const ScalarField& theta) {
  const ScalarField s = to_spectral(theta);
  VectorField v(s.grid(), Representation::spectral);
  v[2] = s;
  return v;
}

VectorField match_representation(VectorField v, Representation rep) {
  return rep == Representation::real ? to_real(v) : v;
}
ScalarField match_representation(ScalarField v, Representation rep) {
  return rep == Representation::real ? to_real(v) : v;
}

}  // namespace

FlowState linear_flow(const VectorField& u0, const ScalarField& theta0, double t,
                      LinearForm form, std::size_t steps, Quadrature quadrature) {
  if (t < 0.0) throw ConfigError("linear flow requires t >= 0");
  require_same_grid(u0.grid(), theta0.grid(), "linear flow");
  const Representation rep = u0.representation();
  const VectorField u_data = to_spectral(ensure_solenoidal(u0));
  const ScalarField th_spec = to_spectral(theta0);
  ScalarField theta_t = heat_semigroup(th_spec, t);
  VectorField u_t(u0.grid(), Representation::spectral);
  if (form == LinearForm::IEE) {
    VectorField data = u_data;
    data.add_scaled(t, leray_project(vertical(th_spec)));
    u_t = heat_semigroup(data, t);
  } else {
    u_t = heat_semigroup(u_data, t);
    if (t > 0.0) {
      if (steps < 2) throw ConfigError("IE linear flow needs at least 2 quadrature steps");
      const double dt = t / static_cast<double>(steps);
      Trajectory heat{u0.grid(), dt, 0.0, {}, {}};
      for (std::size_t j = 0; j <= steps; ++j) {
        heat.u.emplace_back(u0.grid(), Representation::spectral);
        heat.theta.push_back(heat_semigroup(th_spec, heat.elapsed(j)));
      }
      u_t += buoyancy_integral_all(heat, quadrature).back();
    }
  }
  u_t.divergence_free = true;
  return {match_representation(std::move(u_t), rep),
          match_representation(std::move(theta_t), theta0.representation())};
}

Trajectory linear_flow_trajectory(const VectorField& u0, const ScalarField& theta0, double dt,
                                  std::size_t steps) {
  require_same_grid(u0.grid(), theta0.grid(), "linear flow");
  const VectorField u_data = to_spectral(ensure_solenoidal(u0));
  const ScalarField th_spec = to_spectral(theta0);
  const VectorField buoy = leray_project(vertical(th_spec));
  Trajectory traj{u0.grid(), dt, 0.0, {}, {}};
  for (std::size_t j = 0; j <= steps; ++j) {
    const double t = traj.elapsed(j);
    VectorField data = u_data;
    data.add_scaled(t, buoy);
    VectorField u = heat_semigroup(data, t);
    u.divergence_free = true;
    traj.u.push_back(std::move(u));
    traj.theta.push_back(heat_semigroup(th_spec, t));
  }
  return make_trajectory(traj.grid, dt, std::move(traj.u), std::move(traj.theta));
}

void require_same_time_grid(const Trajectory& a, const Trajectory& b, const char* what) {
  require_same_grid(a.grid, b.grid, what);
  if (a.size() != b.size() || a.dt != b.dt) {
    throw FieldMismatch(std::string(what) + ": trajectories use different time grids");
  }
}

std::array<ScalarField, 3> band_velocity(const VectorField& v) {
  return {band_limited_samples(v[0]), band_limited_samples(v[1]), band_limited_samples(v[2])};
}

VectorField projected_advection(const std::array<ScalarField, 3>& u,
                                const std::array<ScalarField, 3>& v) {
  const Grid3& g = u[0].grid();
  VectorField out(g, Representation::spectral);
  for (int i = 0; i < 3; ++i) {
    auto acc = out[i].modes();
    for (int l = 0; l < 3; ++l) {
      const ScalarField prod =
          product_to_spectral(u[static_cast<std::size_t>(l)], v[static_cast<std::size_t>(i)]);
      const auto pm = prod.modes();
      for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
        const double kd = g.derivative_wavenumber(l == 0 ? ix : (l == 1 ? iy : iz));
        acc[idx] += Complex(0.0, kd) * pm[idx];
      });
    }
  }
  return leray_project(out);
}

ScalarField flux_divergence(const std::array<ScalarField, 3>& u, const ScalarField& theta) {
  VectorField flux(product_to_spectral(u[0], theta), product_to_spectral(u[1], theta),
                   product_to_spectral(u[2], theta));
  return divergence(flux);
}

namespace {

std::vector<VectorField> integrate_vector(const DuhamelQuadrature& quad,
                                          const std::vector<VectorField>& forcing, bool weighted,
                                          double sign) {
  std::array<std::vector<ScalarField>, 3> split;
  for (const auto& f : forcing) {
    for (int a = 0; a < 3; ++a) split[static_cast<std::size_t>(a)].push_back(f[a]);
  }
  std::array<std::vector<ScalarField>, 3> integ;
  for (int a = 0; a < 3; ++a) {
    integ[static_cast<std::size_t>(a)] = quad.integrate(split[static_cast<std::size_t>(a)], weighted);
  }
  std::vector<VectorField> out;
  out.reserve(forcing.size());
  for (std::size_t j = 0; j < forcing.size(); ++j) {
    VectorField v(std::move(integ[0][j]), std::move(integ[1][j]), std::move(integ[2][j]));
    v *= sign;
    v.divergence_free = true;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<ScalarField> integrate_scalar(const DuhamelQuadrature& quad,
                                          const std::vector<ScalarField>& forcing, double sign) {
  auto out = quad.integrate(forcing, false);
  for (auto& f : out) f *= sign;
  return out;
}

}  // namespace

std::vector<VectorField> B1_all(const Trajectory& u_traj, const Trajectory& v_traj,
                                Quadrature quadrature) {
  require_same_time_grid(u_traj, v_traj, "B1");
  const bool same = &u_traj == &v_traj;
  std::vector<VectorField> forcing;
  forcing.reserve(u_traj.size());
  for (std::size_t j = 0; j < u_traj.size(); ++j) {
    const auto u = band_velocity(u_traj.u[j]);
    if (same) {
      forcing.push_back(projected_advection(u, u));
    } else {
      forcing.push_back(projected_advection(u, band_velocity(v_traj.u[j])));
    }
  }
  const DuhamelQuadrature quad(u_traj.grid, u_traj.dt, quadrature);
  return integrate_vector(quad, forcing, false, -1.0);
}

std::vector<VectorField> B2_all(const Trajectory& u_traj, const Trajectory& theta_traj,
                                Quadrature quadrature) {
  require_same_time_grid(u_traj, theta_traj, "B2");
  std::vector<VectorField> forcing;
  forcing.reserve(u_traj.size());
  for (std::size_t j = 0; j < u_traj.size(); ++j) {
    const auto u = band_velocity(u_traj.u[j]);
    forcing.push_back(leray_project(vertical(flux_divergence(u, band_limited_samples(theta_traj.theta[j])))));
  }
  const DuhamelQuadrature quad(u_traj.grid, u_traj.dt, quadrature);
  return integrate_vector(quad, forcing, true, -1.0);
}

std::vector<ScalarField> B3_all(const Trajectory& u_traj, const Trajectory& theta_traj,
                                Quadrature quadrature) {
  require_same_time_grid(u_traj, theta_traj, "B3");
  std::vector<ScalarField> forcing;
  forcing.reserve(u_traj.size());
  for (std::size_t j = 0; j < u_traj.size(); ++j) {
    const auto u = band_velocity(u_traj.u[j]);
    forcing.push_back(flux_divergence(u, band_limited_samples(theta_traj.theta[j])));
  }
  const DuhamelQuadrature quad(u_traj.grid, u_traj.dt, quadrature);
  return integrate_scalar(quad, forcing, -1.0);
}

namespace {
void require_index(const Trajectory& t, std::size_t index) {
  if (index > t.steps()) throw ConfigError("time index beyond the trajectory");
}
}  // namespace

VectorField B1(const Trajectory& u_traj, const Trajectory& v_traj, std::size_t t_index,
               Quadrature quadrature) {
  require_index(u_traj, t_index);
  return B1_all(u_traj, v_traj, quadrature)[t_index];
}
VectorField B2(const Trajectory& u_traj, const Trajectory& theta_traj, std::size_t t_index,
               Quadrature quadrature) {
  require_index(u_traj, t_index);
  return B2_all(u_traj, theta_traj, quadrature)[t_index];
}
ScalarField B3(const Trajectory& u_traj, const Trajectory& theta_traj, std::size_t t_index,
               Quadrature quadrature) {
  require_index(u_traj, t_index);
  return B3_all(u_traj, theta_traj, quadrature)[t_index];
}

std::vector<VectorField> buoyancy_integral_all(const Trajectory& theta_traj, Quadrature quadrature) {
  std::vector<VectorField> forcing;
  forcing.reserve(theta_traj.size());
  for (const auto& th : theta_traj.theta) forcing.push_back(leray_project(vertical(th)));
  const DuhamelQuadrature quad(theta_traj.grid, theta_traj.dt, quadrature);
  return integrate_vector(quad, forcing, false, 1.0);
}

PairOperatorResult pair_operator(const Trajectory& v, const Trajectory& w, Quadrature quadrature) {
  require_same_time_grid(v, w, "pair operator");
  const bool same = &v == &w;
  std::vector<VectorField> f1;
  std::vector<VectorField> f2;
  std::vector<ScalarField> f3;
  f1.reserve(v.size());
  f2.reserve(v.size());
  f3.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto u = band_velocity(v.u[j]);
    const ScalarField th = band_limited_samples(w.theta[j]);
    f1.push_back(same ? projected_advection(u, u) : projected_advection(u, band_velocity(w.u[j])));
    ScalarField flux_div = flux_divergence(u, th);
    f2.push_back(leray_project(vertical(flux_div)));
    f3.push_back(std::move(flux_div));
  }
  const DuhamelQuadrature quad(v.grid, v.dt, quadrature);
  PairOperatorResult out;
  out.u = integrate_vector(quad, f1, false, -1.0);
  const auto b2 = integrate_vector(quad, f2, true, -1.0);
  for (std::size_t j = 0; j < out.u.size(); ++j) out.u[j] += b2[j];
  out.theta = integrate_scalar(quad, f3, -1.0);
  return out;
}

}  // namespace bmild
