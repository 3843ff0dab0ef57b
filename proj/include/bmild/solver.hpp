#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmild/duhamel.hpp"
#include "bmild/error.hpp"
#include "bmild/norms.hpp"

namespace bmild {

enum class InitialIterate { linear_flow, zero, perturbed };

std::string to_string(InitialIterate v);
InitialIterate parse_initial_iterate(const std::string& name);

struct SolveConfig {
  int n = 0;               // 0: taken from the data
  double box_length = 0.0;  // 0: taken from the data
  double horizon = 1.0;
  double dt = 1.0 / 64.0;
  double p = 4.0;
  double q = 2.0;
  int max_iterations = 50;
  double eps_fix = 1e-8;
  Quadrature quadrature = Quadrature::exp_linear;
  InitialIterate initial_iterate = InitialIterate::linear_flow;
  double perturbation = 1e-2;  // relative size of the perturbed initial iterate
  std::uint64_t seed = 0;
  std::size_t c0_samples = 0;  // random pairs added to (v0, v0) when estimating C0
  int reference_substeps = 4;  // integrating-factor steps per dt in the reference stepper
  bool buoyancy = true;        // reference stepper only; false drops P(theta e3)

  /// Number of time steps T/dt; T must be an integer multiple of dt.
  std::size_t steps() const;
};

/// Checks T > 0, dt > 0, T/dt integral and >= 2, p > 3, 3/2 < q < 3, 1/p + 1/q > 2/3,
/// max_iterations >= 1, eps_fix > 0.
void validate(const SolveConfig& cfg);

struct PicardIteration {
  int index = 0;
  double residual = 0.0;  // ||v^{n+1} - v^n||_E
  double ratio = 0.0;     // residual / previous residual (0 for the first)
  double norm = 0.0;      // ||v^{n+1}||_E
};

struct PicardReport {
  std::vector<PicardIteration> iterations;
  double v0_norm = 0.0;
  double c0 = 0.0;
  std::size_t c0_samples = 0;
  bool smallness_holds = false;  // ||v0||_E < 1/(4 C0)
  double solution_norm = 0.0;
  bool bound_holds = false;      // ||v||_E <= 2||v0||_E + eps_fix
  bool converged = false;
  double max_ratio = 0.0;        // largest contraction ratio after the first iteration
  Quadrature quadrature = Quadrature::exp_linear;
  InitialIterate initial_iterate = InitialIterate::linear_flow;
  double p = 4.0;
  double q = 2.0;

  std::string smallness_verdict() const;
};

class ContractionFailed : public Error {
 public:
  ContractionFailed(const std::string& what, PicardReport report)
      : Error(what), report_(std::move(report)) {}
  const PicardReport& report() const { return report_; }

 private:
  PicardReport report_;
};

class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, PicardReport report)
      : Error(what), report_(std::move(report)) {}
  const PicardReport& report() const { return report_; }

 private:
  PicardReport report_;
};

struct Solution {
  Trajectory trajectory;  // spectral fields
  PicardReport report;
};

/// Picard iteration v^{n+1} = v0 + B(v^n, v^n) in E = X_p x Y_q. Throws ContractionFailed
/// after three consecutive residual increases and BlowUp on non-finite residuals; running
/// out of iterations returns with report.converged = false.
Solution picard_solve(const VectorField& u0, const ScalarField& theta0, const SolveConfig& cfg);

/// Integrating-factor RK4 pseudo-spectral stepper for the differential form, with
/// cfg.reference_substeps steps per dt. Warns on std::clog when max|u| h/dx > 0.5.
Trajectory solve_pde_reference(const VectorField& u0, const ScalarField& theta0,
                               const SolveConfig& cfg);

/// The state after a further time delta, solved as new data with the step of cfg.
FlowState semigroup_step(const FlowState& state, double delta, const SolveConfig& cfg);

/// Time grid used by semigroup_step: delta split into max(2, round(delta / dt)) steps.
SolveConfig restart_config(const SolveConfig& cfg, double delta);

FlowState state_at(const Trajectory& traj, std::size_t j);

struct BootstrapLadder {
  std::vector<double> p_sequence;  // ends at inf
  std::vector<double> q_sequence;  // ends at inf
  std::vector<NormProfile> velocity;     // X_{p_k}
  std::vector<NormProfile> temperature;  // Y_{q_k}
  std::vector<NormProfile> extra;        // X3, Y1, X_inf, Y_inf, X, Y
  bool all_finite = false;
  VanishingDiagnostic x_inf_vanishing;
  VanishingDiagnostic y_inf_vanishing;

  std::vector<const NormProfile*> profiles() const;
};

/// 1/p_{k+1} is the midpoint of (max(2/p_k - 1/3, 0), 1/p_k), jumping to inf once p_k > 6.
std::vector<double> velocity_ladder(double p);
/// 1/q_{k+1} is the midpoint of (1/p + 1/q_k - 1/3, 1/q_k), jumping to inf once the lower
/// end is negative.
std::vector<double> temperature_ladder(double p, double q);

BootstrapLadder bootstrap_ladder(const Trajectory& traj, const SolveConfig& cfg,
                                 double vanishing_fraction = 0.2);

/// Trajectory arithmetic on matching time grids.
Trajectory add(const Trajectory& a, const Trajectory& b, double factor = 1.0);

}  // namespace bmild
