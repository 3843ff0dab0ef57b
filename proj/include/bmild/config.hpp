#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bmild/data.hpp"
#include "bmild/solver.hpp"

namespace bmild {

/// Experiment configuration read from a key=value text file. '#' starts a comment; blank
/// lines are ignored. Lists are comma-separated; "inf" is accepted wherever an exponent is.
struct ExperimentConfig {
  // grid and time
  int n = 32;
  double box_length = 12.0;
  double horizon = 1.0;
  double dt = 1.0 / 64.0;
  // solver
  double p = 4.0;
  double q = 2.0;
  int max_iterations = 50;
  double eps_fix = 1e-8;
  Quadrature quadrature = Quadrature::exp_linear;
  InitialIterate initial_iterate = InitialIterate::linear_flow;
  double perturbation = 1e-2;
  std::size_t c0_samples = 0;
  int reference_substeps = 4;
  double smallness_target = 0.0;  // > 0: rescale data so ||v0||_E = target / C0
  // data
  DataSpec data;
  std::string input_u;      // optional velocity snapshot (solve)
  std::string input_theta;  // optional temperature snapshot (solve)
  std::vector<double> snapshot_times;  // empty: t = 0 and t = T
  // kernels
  std::vector<double> kernel_t_grid{0.5, 1.0, 2.0};
  std::vector<double> buoyancy_t_grid{1.0, 2.0, 4.0, 8.0};
  double buoyancy_gaussian_time = 0.25;
  std::vector<double> kernel_betas{1.0, 1.5, 2.0, kInf};
  double selfsim_t1 = 0.25;
  double selfsim_t2 = 1.0;
  double decay_r_min = 5.0;
  int decay_shells = 16;
  double decay_tolerance = 0.15;
  double slope_tolerance = 0.05;
  double selfsim_tolerance = 1e-3;
  // scaling
  std::vector<double> lambdas{1.0, 2.0};
  double scaling_tolerance = 1e-3;
  double data_norm_tolerance = 1e-6;
  // uniqueness
  double uniqueness_tolerance = 5e-4;
  bool refinement_check = true;
  // norm decay
  int horizons = 4;
  int composite_levels = 7;
  double vanishing_fraction = 0.2;
  double composite_fraction = 1e-3;
  // output
  std::string out_dir = "bmild_out";

  SolveConfig solve_config() const;
  /// Canonical key=value listing of every resolved setting, sorted by key.
  std::string canonical() const;
  /// FNV-1a 64-bit hash of canonical(), as 16 hex digits.
  std::string hash() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace bmild
