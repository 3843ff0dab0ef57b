#include <cmath>
#include <numbers>
#include <vector>

#include "bmild/bilinear.hpp"
#include "bmild/config.hpp"
#include "bmild/data.hpp"
#include "bmild/duhamel.hpp"
#include "bmild/error.hpp"
#include "bmild/experiments.hpp"
#include "bmild/norms.hpp"
#include "bmild/solver.hpp"
#include "bmild/spectral.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bmild;
using namespace bmild::test;

namespace {

const Grid3& grid() {
  static const Grid3 g = make_grid(16, 12.0);
  return g;
}

InitialData gaussian(double amplitude = 0.1) {
  DataSpec spec;
  spec.amplitude = amplitude;
  spec.theta_amplitude = amplitude;
  return make_initial_data(grid(), spec);
}

SolveConfig base_config(double T = 0.5, double dt = 1.0 / 32.0) {
  SolveConfig cfg;
  cfg.horizon = T;
  cfg.dt = dt;
  return cfg;
}

double distance_e(const Trajectory& a, const Trajectory& b, double p, double q) {
  return e_norm(add(a, b, -1.0), p, q);
}

double mean_of(const ScalarField& f) { return to_spectral(f).modes()[0].real(); }

}  // namespace

TEST_CASE("solver configuration is validated") {
  SolveConfig ok = base_config();
  CHECK_NOTHROW(validate(ok));
  auto rejects = [](SolveConfig c) { CHECK_THROWS_AS(validate(c), ConfigError); };
  SolveConfig c = ok;
  c.p = 3.0;
  rejects(c);
  c = ok;
  c.q = 1.5;
  rejects(c);
  c = ok;
  c.q = 3.0;
  rejects(c);
  c = ok;
  c.p = 12.0;
  c.q = 2.9;  // 1/p + 1/q < 2/3
  rejects(c);
  c = ok;
  c.dt = 0.3;
  rejects(c);
  c = ok;
  c.max_iterations = 0;
  rejects(c);
  c = ok;
  c.eps_fix = 0.0;
  rejects(c);
  c = ok;
  c.dt = 0.25;
  c.horizon = 0.25;
  rejects(c);
  CHECK(ok.steps() == 16);
}

TEST_CASE("zero data converge to the zero trajectory in one iteration") {
  const Solution s = picard_solve(VectorField(grid()), ScalarField(grid()), base_config());
  CHECK(s.report.iterations.size() == 1);
  CHECK(s.report.converged);
  CHECK(s.report.solution_norm == 0.0);
  for (std::size_t j = 0; j < s.trajectory.size(); ++j) {
    CHECK(lp_norm(s.trajectory.u[j], kInf) == 0.0);
    CHECK(lp_norm(s.trajectory.theta[j], kInf) == 0.0);
  }
  const Trajectory r = solve_pde_reference(VectorField(grid()), ScalarField(grid()), base_config());
  CHECK(lp_norm(r.u.back(), kInf) == 0.0);
  CHECK(lp_norm(r.theta.back(), kInf) == 0.0);
}

TEST_CASE("without temperature the system reduces to Navier-Stokes") {
  const Grid3 g = make_grid(16, 2.0 * std::numbers::pi);
  DataSpec spec;
  spec.preset = Preset::taylor_green;
  spec.amplitude = 0.1;
  spec.theta_amplitude = 0.0;
  const InitialData d = make_initial_data(g, spec);
  const SolveConfig cfg = base_config();
  const Solution s = picard_solve(d.u, d.theta, cfg);
  CHECK(s.report.converged);
  for (const ScalarField& th : s.trajectory.theta) CHECK(lp_norm(th, kInf) == 0.0);
  const Trajectory ref = solve_pde_reference(d.u, d.theta, cfg);
  CHECK(rel_l2(s.trajectory.u.back(), ref.u.back()) <= 1e-4);
  // The nonlinear term is visible at this tolerance.
  CHECK(rel_l2(linear_flow(d.u, d.theta, cfg.horizon).u, s.trajectory.u.back()) > 1e-3);
}

TEST_CASE("Picard iteration agrees with the integrating-factor stepper") {
  const InitialData d = gaussian();
  const SolveConfig cfg = base_config();
  const Solution s = picard_solve(d.u, d.theta, cfg);
  const Trajectory ref = solve_pde_reference(d.u, d.theta, cfg);
  CHECK(rel_l2(s.trajectory.u.back(), ref.u.back()) <= 1e-4);
  CHECK(rel_l2(s.trajectory.theta.back(), ref.theta.back()) <= 1e-4);
}

TEST_CASE("pure buoyancy forcing: u(t)/t tends to P(theta0 e3)") {
  const InitialData d = gaussian();
  const SolveConfig cfg = base_config(0.25, 1.0 / 64.0);
  const Solution s = picard_solve(VectorField(grid()), d.theta, cfg);
  const VectorField target = to_real(leray_project(VectorField(ScalarField(grid()), ScalarField(grid()), d.theta)));
  const double e1 = rel_l2((1.0 / cfg.dt) * to_real(s.trajectory.u[1]), target);
  const double e2 = rel_l2((0.5 / cfg.dt) * to_real(s.trajectory.u[2]), target);
  CHECK(lp_norm(s.trajectory.u[1], 2.0) > 0.0);
  CHECK(e1 < e2);
  CHECK(e1 < 0.1);
  CHECK(std::log2(e2 / e1) > 0.8);
}

TEST_CASE("reference stepper without buoyancy is the heat flow for theta") {
  const InitialData d = gaussian();
  SolveConfig cfg = base_config();
  cfg.buoyancy = false;
  const Trajectory r = solve_pde_reference(VectorField(grid()), d.theta, cfg);
  for (std::size_t j = 0; j < r.size(); ++j) {
    CHECK(lp_norm(r.u[j], kInf) == 0.0);
    CHECK(lp_norm(to_real(r.theta[j]) - to_real(heat_semigroup(d.theta, r.elapsed(j))), kInf) <=
          1e-8 * lp_norm(d.theta, kInf));
  }
}

TEST_CASE("contraction diagnostics and fixed point defect") {
  const InitialData d = gaussian();
  const SolveConfig cfg = base_config();
  const Solution s = picard_solve(d.u, d.theta, cfg);
  const PicardReport& r = s.report;
  CHECK(r.converged);
  CHECK(r.smallness_holds);
  CHECK(r.bound_holds);
  CHECK(r.solution_norm <= 2.0 * r.v0_norm + cfg.eps_fix);
  CHECK(r.iterations.back().residual <= cfg.eps_fix);
  CHECK(r.max_ratio <= 0.9);
  for (std::size_t i = 1; i < r.iterations.size(); ++i) {
    CHECK(r.iterations[i].residual < r.iterations[i - 1].residual);
    CHECK(std::isfinite(r.iterations[i].residual));
  }
  CHECK(r.c0 > 0.0);
  CHECK_FALSE(r.smallness_verdict().empty());

  const Trajectory v0 = linear_flow_trajectory(d.u, d.theta, cfg.dt, cfg.steps());
  const PairOperatorResult b = pair_operator(s.trajectory, s.trajectory, cfg.quadrature);
  std::vector<VectorField> u;
  std::vector<ScalarField> th;
  for (std::size_t j = 0; j < v0.size(); ++j) {
    u.push_back(to_real(v0.u[j]) + to_real(b.u[j]) - to_real(s.trajectory.u[j]));
    th.push_back(to_real(v0.theta[j]) + to_real(b.theta[j]) - to_real(s.trajectory.theta[j]));
  }
  const Trajectory defect = make_trajectory(grid(), cfg.dt, u, th);
  CHECK(e_norm(defect, cfg.p, cfg.q) <= cfg.eps_fix);
}

TEST_CASE("different initial iterates reach the same fixed point") {
  const InitialData d = gaussian();
  SolveConfig cfg = base_config();
  const Solution a = picard_solve(d.u, d.theta, cfg);
  cfg.initial_iterate = InitialIterate::zero;
  const Solution b = picard_solve(d.u, d.theta, cfg);
  cfg.initial_iterate = InitialIterate::perturbed;
  const Solution c = picard_solve(d.u, d.theta, cfg);
  CHECK(distance_e(a.trajectory, b.trajectory, cfg.p, cfg.q) <= 10.0 * cfg.eps_fix);
  CHECK(distance_e(a.trajectory, c.trajectory, cfg.p, cfg.q) <= 10.0 * cfg.eps_fix);
  CHECK(b.report.initial_iterate == InitialIterate::zero);
}

TEST_CASE("temperature mean is conserved") {
  const InitialData d = gaussian();
  const Solution s = picard_solve(d.u, d.theta, base_config());
  const double m0 = mean_of(d.theta);
  const double l1 = lp_norm(d.theta, 1.0);
  for (const ScalarField& th : s.trajectory.theta) CHECK(std::abs(mean_of(th) - m0) <= 1e-6 * l1);
}

TEST_CASE("semigroup law, small steps and restarts") {
  const InitialData d = gaussian();
  const SolveConfig cfg = base_config(0.5, 1.0 / 32.0);
  const FlowState s0{d.u, d.theta};
  const FlowState direct = semigroup_step(s0, 0.5, cfg);
  const FlowState composed = semigroup_step(semigroup_step(s0, 0.25, cfg), 0.25, cfg);
  CHECK(rel_l2(composed.u, direct.u) <= 5e-4);
  CHECK(rel_l2(composed.theta, direct.theta) <= 5e-4);

  const FlowState tiny = semigroup_step(s0, 1e-10, cfg);
  CHECK(lp_norm(to_real(tiny.u) - d.u, kInf) <= 1e-8 * lp_norm(d.u, kInf));
  CHECK(lp_norm(to_real(tiny.theta) - d.theta, kInf) <= 1e-8 * lp_norm(d.theta, kInf));

  const Solution full = picard_solve(d.u, d.theta, cfg);
  const std::size_t mid = full.trajectory.steps() / 2;
  const FlowState at_mid = state_at(full.trajectory, mid);
  const SolveConfig tail_cfg = restart_config(cfg, cfg.horizon - full.trajectory.elapsed(mid));
  const Solution tail = picard_solve(at_mid.u, at_mid.theta, tail_cfg);
  CHECK(tail.trajectory.dt == doctest::Approx(cfg.dt));
  for (std::size_t j = 0; j < tail.trajectory.size(); ++j) {
    CHECK(rel_l2(tail.trajectory.u[j], full.trajectory.u[mid + j]) <= 5e-4);
    CHECK(rel_l2(tail.trajectory.theta[j], full.trajectory.theta[mid + j]) <= 5e-4);
  }
}

TEST_CASE("exponent ladders follow the bootstrap rules") {
  const std::vector<double> p = velocity_ladder(4.0);
  REQUIRE(p.size() == 4);
  CHECK(p[1] == doctest::Approx(4.8));
  CHECK(p[2] == doctest::Approx(48.0 / 7.0));
  CHECK(std::isinf(p[3]));
  for (double p0 : {3.5, 4.0, 5.0, 7.0}) {
    const std::vector<double> lad = velocity_ladder(p0);
    CHECK(lad.front() == p0);
    CHECK(std::isinf(lad.back()));
    for (std::size_t k = 0; k + 2 < lad.size(); ++k) {
      const double lo = std::max(2.0 / lad[k] - 1.0 / 3.0, 0.0);
      CHECK(1.0 / lad[k + 1] > lo);
      CHECK(1.0 / lad[k + 1] < 1.0 / lad[k]);
    }
  }
  for (auto [pp, qq] : {std::pair{4.0, 2.0}, std::pair{5.0, 1.8}, std::pair{3.5, 2.5}}) {
    const std::vector<double> lad = temperature_ladder(pp, qq);
    CHECK(lad.front() == qq);
    CHECK(std::isinf(lad.back()));
    for (std::size_t k = 0; k + 2 < lad.size(); ++k) {
      const double lo = 1.0 / pp + 1.0 / lad[k] - 1.0 / 3.0;
      CHECK(1.0 / lad[k + 1] > lo);
      CHECK(1.0 / lad[k + 1] < 1.0 / lad[k]);
    }
    const double last_lo = 1.0 / pp + 1.0 / lad[lad.size() - 2] - 1.0 / 3.0;
    CHECK(last_lo < 0.0);
  }
}

TEST_CASE("bootstrap ladder on a solution and on zero") {
  const InitialData d = gaussian();
  // The first sample bounds the vanishing ratio below by sqrt(dt/T).
  const SolveConfig cfg = base_config(0.125, 1.0 / 1024.0);
  const Solution s = picard_solve(d.u, d.theta, cfg);
  const BootstrapLadder lad = bootstrap_ladder(s.trajectory, cfg);
  CHECK(lad.all_finite);
  CHECK(lad.x_inf_vanishing.vanishing);
  CHECK(lad.y_inf_vanishing.vanishing);
  CHECK(lad.velocity.size() == lad.p_sequence.size());
  CHECK(lad.temperature.size() == lad.q_sequence.size());
  bool found_y1 = false;
  for (const NormProfile& prof : lad.extra) {
    if (prof.kind.family == NormFamily::Yq && prof.kind.exponent == 1.0) {
      found_y1 = true;
      CHECK(prof.supremum == doctest::Approx(lp_norm(d.theta, 1.0)).epsilon(1e-3));
    }
  }
  CHECK(found_y1);

  const BootstrapLadder zero = bootstrap_ladder(zero_trajectory(grid(), cfg.dt, cfg.steps()), cfg);
  CHECK(zero.all_finite);
  for (const NormProfile* prof : zero.profiles()) CHECK(prof->supremum == 0.0);
}

TEST_CASE("large data fail with a contraction or blow-up error") {
  const InitialData d = gaussian(100.0);
  SolveConfig cfg = base_config(1.0, 1.0 / 16.0);
  bool failed = false;
  try {
    picard_solve(d.u, d.theta, cfg);
  } catch (const ContractionFailed& e) {
    failed = true;
    CHECK_FALSE(e.report().iterations.empty());
    CHECK_FALSE(e.report().smallness_holds);
  } catch (const BlowUp&) {
    failed = true;
  }
  CHECK(failed);
}

TEST_CASE("running out of iterations is reported as non-convergence") {
  const InitialData d = gaussian();
  SolveConfig cfg = base_config();
  cfg.max_iterations = 2;
  const Solution s = picard_solve(d.u, d.theta, cfg);
  CHECK_FALSE(s.report.converged);
  CHECK(s.report.iterations.size() == 2);
}

TEST_CASE("scaling covariance holds for a non-dyadic factor") {
  ExperimentConfig cfg;
  cfg.n = 16;
  cfg.box_length = 12.0;
  cfg.horizon = 0.5;
  cfg.dt = 1.0 / 32.0;
  cfg.lambdas = {1.0, 1.5};
  const ScalingReport rep = run_scaling(cfg);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].u_deviation == 0.0);
  CHECK(rep.rows[0].theta_deviation == 0.0);
  for (const ScalingRow& row : rep.rows) {
    CHECK(row.u_deviation <= 1e-3);
    CHECK(row.theta_deviation <= 1e-3);
    CHECK(std::abs(row.u_l3_ratio - 1.0) <= 1e-6);
    CHECK(std::abs(row.theta_l1_ratio - 1.0) <= 1e-6);
    CHECK(row.pass);
  }
  CHECK(rep.pass());
}
