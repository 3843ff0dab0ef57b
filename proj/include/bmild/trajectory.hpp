#pragma once

#include <cstddef>
#include <vector>

#include "bmild/field.hpp"
#include "bmild/grid.hpp"

namespace bmild {

/// The discrete mild solution: (u, theta) sampled on the uniform time grid
/// t_j = start_time + j*dt, j = 0..m. Weighted norms use the elapsed time j*dt.
struct Trajectory {
  Grid3 grid;
  double dt;
  double start_time = 0.0;
  std::vector<VectorField> u;
  std::vector<ScalarField> theta;

  std::size_t steps() const { return u.empty() ? 0 : u.size() - 1; }
  std::size_t size() const { return u.size(); }
  double elapsed(std::size_t j) const { return static_cast<double>(j) * dt; }
  double time(std::size_t j) const { return start_time + elapsed(j); }
  double horizon() const { return elapsed(steps()); }
};

/// Validates the invariants: dt > 0, m >= 2, matching sample counts, one grid.
Trajectory make_trajectory(const Grid3& grid, double dt, std::vector<VectorField> u,
                           std::vector<ScalarField> theta);

/// A zero trajectory with m steps, stored in real representation.
Trajectory zero_trajectory(const Grid3& grid, double dt, std::size_t steps);

/// Same fields, all converted to real (or spectral) representation.
Trajectory to_real(const Trajectory& traj);
Trajectory to_spectral(const Trajectory& traj);

}  // namespace bmild
