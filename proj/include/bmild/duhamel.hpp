#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "bmild/field.hpp"
#include "bmild/trajectory.hpp"

namespace bmild {

/// Time quadrature of the Duhamel integrals int_0^t e^{(t-s)Lap} w(t-s) g(s) ds.
///  exp_linear     g is interpolated linearly between nodes and integrated exactly
///                 against e^{-(t-s)|k|^2} w(t-s) for every mode (second order).
///  left_endpoint  g is frozen at the left node of each step and integrated exactly
///                 against the same factor (exponential Euler, first order).
enum class Quadrature { left_endpoint, exp_linear };

std::string to_string(Quadrature q);
Quadrature parse_quadrature(const std::string& name);
std::string describe(Quadrature q);

/// Integrates forcing samples g_0..g_m (spectral, one grid) for every node at once with a
/// mode-wise recursion, O(m) in the number of steps.
class DuhamelQuadrature {
 public:
  DuhamelQuadrature(const Grid3& grid, double dt, Quadrature variant);

  /// weighted = false: w = 1.  weighted = true: w(tau) = tau.
  std::vector<ScalarField> integrate(const std::vector<ScalarField>& forcing, bool weighted) const;

  Quadrature variant() const { return variant_; }

 private:
  Grid3 grid_;
  double dt_;
  Quadrature variant_;
  // Per-mode coefficients of the one-step update.
  std::vector<double> decay_;
  std::vector<double> left_;        // coefficient of g_i         (w = 1)
  std::vector<double> right_;       // coefficient of g_{i+1}     (w = 1)
  std::vector<double> left_w_;      // coefficient of g_i         (w = tau)
  std::vector<double> right_w_;     // coefficient of g_{i+1}     (w = tau)
};

/// phi-type integrals I_m(z) = int_0^1 r^m e^{-z r} dr, m = 0, 1, 2, stable for all z >= 0.
double exp_moment(int m, double z);

enum class LinearForm { IE, IEE };

struct FlowState {
  VectorField u;
  ScalarField theta;
};

/// The linear flow v0 at time t. IEE: e^{tL}[u0 + t P(theta0 e3)] and e^{tL} theta0.
/// IE: e^{tL}u0 plus the buoyancy integral int_0^t e^{(t-s)L} P(e^{sL}theta0 e3) ds computed
/// with `steps` quadrature steps. u0 is projected (with a warning) when not solenoidal.
FlowState linear_flow(const VectorField& u0, const ScalarField& theta0, double t,
                      LinearForm form = LinearForm::IEE, std::size_t steps = 64,
                      Quadrature quadrature = Quadrature::exp_linear);

/// v0 on every node of a time grid, spectral fields.
Trajectory linear_flow_trajectory(const VectorField& u0, const ScalarField& theta0, double dt,
                                  std::size_t steps);

/// Returns u0 projected when ||div u0||_2 > 1e-10 ||u0||_2, warning on std::clog.
VectorField ensure_solenoidal(const VectorField& u0);

// The bilinear operators evaluated at every node; entry j is the value at t_j.
// Outputs are spectral. The first argument supplies u, the second v (resp. theta).
std::vector<VectorField> B1_all(const Trajectory& u_traj, const Trajectory& v_traj,
                                Quadrature quadrature = Quadrature::exp_linear);
std::vector<VectorField> B2_all(const Trajectory& u_traj, const Trajectory& theta_traj,
                                Quadrature quadrature = Quadrature::exp_linear);
std::vector<ScalarField> B3_all(const Trajectory& u_traj, const Trajectory& theta_traj,
                                Quadrature quadrature = Quadrature::exp_linear);

/// B1(u,v)(t) = -int_0^t e^{(t-s)L} P div(u (x) v)(s) ds, with div(u (x) v)_i = d_l(u_l v_i).
VectorField B1(const Trajectory& u_traj, const Trajectory& v_traj, std::size_t t_index,
               Quadrature quadrature = Quadrature::exp_linear);
/// B2(u,theta)(t) = -int_0^t e^{(t-s)L} (t-s) P[(div(u theta))(s) e3] ds.
VectorField B2(const Trajectory& u_traj, const Trajectory& theta_traj, std::size_t t_index,
               Quadrature quadrature = Quadrature::exp_linear);
/// B3(u,theta)(t) = -int_0^t e^{(t-s)L} div(u theta)(s) ds.
ScalarField B3(const Trajectory& u_traj, const Trajectory& theta_traj, std::size_t t_index,
               Quadrature quadrature = Quadrature::exp_linear);

/// int_0^t e^{(t-s)L} P(theta(s) e3) ds at every node (the explicit buoyancy term).
std::vector<VectorField> buoyancy_integral_all(const Trajectory& theta_traj,
                                               Quadrature quadrature = Quadrature::exp_linear);

/// The pair operator B(v, w) = (B1(u, u~) + B2(u, theta~), B3(u, theta~)), spectral.
struct PairOperatorResult {
  std::vector<VectorField> u;
  std::vector<ScalarField> theta;
};
PairOperatorResult pair_operator(const Trajectory& v, const Trajectory& w,
                                 Quadrature quadrature = Quadrature::exp_linear);

/// P div(u (x) v) from real band-limited samples of u and v (band_limited_samples), spectral.
VectorField projected_advection(const std::array<ScalarField, 3>& u,
                                const std::array<ScalarField, 3>& v);
/// div(u theta) from real band-limited samples, spectral.
ScalarField flux_divergence(const std::array<ScalarField, 3>& u, const ScalarField& theta);
/// Real band-limited samples of the three velocity components.
std::array<ScalarField, 3> band_velocity(const VectorField& v);

void require_same_time_grid(const Trajectory& a, const Trajectory& b, const char* what);

}  // namespace bmild
