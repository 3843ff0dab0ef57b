#include "bmild/trajectory.hpp"

#include "bmild/error.hpp"

namespace bmild {

Trajectory make_trajectory(const Grid3& grid, double dt, std::vector<VectorField> u,
                           std::vector<ScalarField> theta) {
  if (!(dt > 0.0)) throw ConfigError("trajectory time step must be positive");
  if (u.size() != theta.size()) throw FieldMismatch("trajectory: u and theta sample counts differ");
  if (u.size() < 3) throw ConfigError("trajectory needs at least 2 time steps");
  for (std::size_t j = 0; j < u.size(); ++j) {
    require_same_grid(grid, u[j].grid(), "trajectory");
    require_same_grid(grid, theta[j].grid(), "trajectory");
  }
  return Trajectory{grid, dt, 0.0, std::move(u), std::move(theta)};
}

Trajectory zero_trajectory(const Grid3& grid, double dt, std::size_t steps) {
  std::vector<VectorField> u(steps + 1, VectorField(grid));
  for (auto& v : u) v.divergence_free = true;
  std::vector<ScalarField> theta(steps + 1, ScalarField(grid));
  return make_trajectory(grid, dt, std::move(u), std::move(theta));
}

Trajectory to_real(const Trajectory& traj) {
  Trajectory out{traj.grid, traj.dt, traj.start_time, {}, {}};
  out.u.reserve(traj.size());
  out.theta.reserve(traj.size());
  for (std::size_t j = 0; j < traj.size(); ++j) {
    out.u.push_back(to_real(traj.u[j]));
    out.theta.push_back(to_real(traj.theta[j]));
  }
  return out;
}

Trajectory to_spectral(const Trajectory& traj) {
  Trajectory out{traj.grid, traj.dt, traj.start_time, {}, {}};
  out.u.reserve(traj.size());
  out.theta.reserve(traj.size());
  for (std::size_t j = 0; j < traj.size(); ++j) {
    out.u.push_back(to_spectral(traj.u[j]));
    out.theta.push_back(to_spectral(traj.theta[j]));
  }
  return out;
}

}  // namespace bmild
