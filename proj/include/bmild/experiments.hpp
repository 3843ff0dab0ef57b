#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bmild/config.hpp"
#include "bmild/data.hpp"
#include "bmild/solver.hpp"

namespace bmild {

enum ExitCode : int {
  kExitPass = 0,
  kExitConfig = 1,
  kExitContraction = 2,
  kExitBlowUp = 3,
  kExitCheckFailed = 4,
};

/// Preset data on the configured grid, or the snapshots named by input_u / input_theta.
InitialData load_data(const ExperimentConfig& cfg);

/// Metadata written at the top of every CSV report.
std::map<std::string, std::string> report_metadata(const ExperimentConfig& cfg,
                                                   const std::string& command);

struct SolveOutcome {
  InitialData data;
  double data_scale = 1.0;  // factor applied for smallness_target
  Solution solution;
  BootstrapLadder ladder;
};
/// Throws ContractionFailed (also when max_iterations runs out) and BlowUp.
SolveOutcome run_solve(const ExperimentConfig& cfg);

struct CheckRow {
  std::string check;
  std::string subject;
  std::string parameter;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct KernelReport {
  std::vector<CheckRow> rows;
  bool pass() const;
};
KernelReport run_kernel_checks(const ExperimentConfig& cfg);

struct ScalingRow {
  double lambda = 1.0;
  double u_l3_ratio = 1.0;
  double theta_l1_ratio = 1.0;
  double u_deviation = 0.0;      // max_j max|u_lambda - lambda u| / max|lambda u|
  double theta_deviation = 0.0;  // same with lambda^3 theta
  int base_iterations = 0;
  int scaled_iterations = 0;
  bool pass = false;
};
struct ScalingReport {
  std::vector<ScalingRow> rows;
  bool pass() const;
};
ScalingReport run_scaling(const ExperimentConfig& cfg);

struct DistanceRow {
  std::string variant;
  std::string description;
  double e_distance = 0.0;
  double e_relative = 0.0;
  double l2_relative = 0.0;  // max over t of the L2 distance over max over t of the L2 norm
  double refined_l2_relative = 0.0;
  double order = 0.0;        // NaN when not measured
  double tolerance = 0.0;
  bool pass = false;
};
struct UniquenessReport {
  std::vector<DistanceRow> rows;
  NormProfile theta_weak_profile;
  VanishingDiagnostic theta_weak_vanishing;
  bool pass() const;
};
UniquenessReport run_uniqueness(const ExperimentConfig& cfg);

struct HorizonRow {
  double horizon = 0.0;
  double x_p = 0.0;
  double y_q = 0.0;
  double x_inf = 0.0;
  double y_inf = 0.0;
};
struct NormDecayReport {
  std::vector<HorizonRow> rows;
  bool x_p_decreasing = false;
  bool y_q_decreasing = false;
  bool x_inf_decreasing = false;
  bool y_inf_decreasing = false;
  NormProfile theta_weak_composite;
  VanishingDiagnostic composite_vanishing;
  BesovEstimate theta0_besov;
  double besov_sigma = 0.0;
  bool pass() const;
};
NormDecayReport run_norm_decay(const ExperimentConfig& cfg);

// Commands: run the experiment, write CSV reports into cfg.out_dir, return 0 or 4.
int cmd_solve(const ExperimentConfig& cfg, std::ostream& log);
int cmd_verify_kernels(const ExperimentConfig& cfg, std::ostream& log);
int cmd_scaling_test(const ExperimentConfig& cfg, std::ostream& log);
int cmd_uniqueness_test(const ExperimentConfig& cfg, std::ostream& log);
int cmd_norm_decay(const ExperimentConfig& cfg, std::ostream& log);

/// Dispatches a command by name and maps failures to exit codes, printing the message
/// to err: configuration/format/resolution errors 1, contraction failure 2, blow-up 3.
int run_command(const std::string& command, const ExperimentConfig& cfg, std::ostream& log,
                std::ostream& err);

}  // namespace bmild
