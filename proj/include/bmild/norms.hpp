#pragma once

#include <limits>
#include <string>
#include <vector>

#include "bmild/field.hpp"
#include "bmild/trajectory.hpp"

namespace bmild {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Lebesgue norm (dx^3 sum |f|^p)^{1/p}; p = kInf gives the max. Vector fields use
/// the pointwise Euclidean magnitude. Spectral inputs are transformed first.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);

/// Weak L^{q,infinity} quasi-norm sup_lambda lambda |{|f| > lambda}|^{1/q}, computed
/// exactly on the samples through the decreasing rearrangement.
double weak_lq_norm(const ScalarField& f, double q);
double weak_lq_norm(const VectorField& v, double q);

enum class NormFamily {
  Lp,         // ||f(t)||_p, unweighted
  WeakLq,     // ||f(t)||_{q,inf}, unweighted
  Xp,         // sup t^{(1/2)(1-3/p)} ||u(t)||_p
  Yq,         // sup t^{(3/2)(1-1/q)} ||theta(t)||_q
  X3weak,     // sup ||u(t)||_{3,inf}
  Yqweak,     // sup t^{(3/2)(1-1/q)} ||theta(t)||_{q,inf}
  BesovHeat,  // sup t^{sigma/2} ||e^{t Lap} f||_q (data norm)
  KatoX,      // sup ||u(t)||_3 + sup sqrt(t) ||u(t)||_inf
  KatoY,      // sup ||theta(t)||_1 + sup t^{3/2} ||theta(t)||_inf
};

enum class NormTarget { velocity, temperature };

struct NormKind {
  NormFamily family = NormFamily::Lp;
  double exponent = 2.0;  // p or q
  double sigma = 0.0;     // BesovHeat smoothness
  double horizon = 0.0;   // BesovHeat horizon T
  NormTarget target = NormTarget::velocity;

  /// Exponent a of the time weight t^a applied to the sampled norm.
  double time_weight_exponent() const;
  std::string name() const;
};

/// Validates exponent ranges: exponents >= 1, 1 < q < inf for Yqweak, sigma > 0 for Besov.
NormKind make_norm_kind(NormFamily family, double exponent, double sigma = 0.0,
                        double horizon = 0.0);

NormKind velocity_norm(double p);     // X_p
NormKind temperature_norm(double q);  // Y_q

struct NormSample {
  double t;
  double value;     // raw norm at t (||u(t)||_3 for KatoX, ||theta(t)||_1 for KatoY)
  double weighted;  // weighted norm at t (sqrt(t)||u||_inf for KatoX, t^{3/2}||theta||_inf for KatoY)
};

struct NormProfile {
  NormKind kind;
  std::vector<NormSample> samples;  // sorted by t
  double supremum = 0.0;            // the trajectory norm
  double limit_at_zero_estimate = 0.0;  // weighted value at the smallest t > 0
  double sup_value = 0.0;           // sup of the raw column (includes t = 0)
  double sup_weighted = 0.0;        // sup of the weighted column over t > 0
};

/// Evaluates kind along the trajectory. Weighted suprema run over t > 0; for a zero
/// weight exponent (X_3, Y_1, X_{3,inf}) the t = 0 sample counts too.
NormProfile trajectory_norm(const Trajectory& traj, const NormKind& kind);
/// Same evaluation on bare samples at t_j = j dt; the kind's target is ignored.
NormProfile sequence_norm(const std::vector<VectorField>& u, double dt, const NormKind& kind);
NormProfile sequence_norm(const std::vector<ScalarField>& theta, double dt, const NormKind& kind);

/// Small-t vanishing diagnosis of a weighted profile.
struct VanishingDiagnostic {
  bool monotone = false;   // weighted values increase over the three earliest t > 0
  double ratio = 0.0;      // earliest weighted value / sup of weighted values
  bool vanishing = false;  // monotone and ratio <= fraction (or identically zero)
};
VanishingDiagnostic diagnose_vanishing(const NormProfile& profile, double fraction);

/// Merges profiles of the same kind (e.g. from nested horizons) into one sorted profile.
NormProfile merge_profiles(const std::vector<NormProfile>& profiles);

struct BesovEstimate {
  double value = 0.0;
  double argmax_t = 0.0;
  std::vector<NormSample> samples;
};

/// max over t_points of t^{sigma/2} ||e^{t Lap} f||_q; weak uses the L^{q,inf} quasi-norm.
BesovEstimate besov_norm(const ScalarField& f, double sigma, double q, double horizon,
                         const std::vector<double>& t_points, bool weak = false);
BesovEstimate besov_norm(const VectorField& f, double sigma, double q, double horizon,
                         const std::vector<double>& t_points, bool weak = false);

/// count points log-spaced in [t_min, t_max].
std::vector<double> log_spaced(double t_min, double t_max, int count);

}  // namespace bmild
