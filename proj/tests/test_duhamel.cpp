#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "bmild/bilinear.hpp"
#include "bmild/data.hpp"
#include "bmild/duhamel.hpp"
#include "bmild/error.hpp"
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

InitialData gaussian_data(double amplitude = 0.1) {
  DataSpec spec;
  spec.amplitude = amplitude;
  spec.theta_amplitude = amplitude;
  return make_initial_data(grid(), spec);
}

Trajectory heat_pair(std::uint64_t seed, double horizon, std::size_t steps) {
  std::mt19937_64 rng(seed);
  return random_heat_trajectory(grid(), horizon, steps, rng);
}

double div_ratio(const VectorField& v) {
  const double norm = lp_norm(v, 2.0);
  return norm == 0.0 ? 0.0 : lp_norm(divergence(v), 2.0) / norm;
}

// Simpson rule for int_0^1 r^m e^{-z r} dr.
double simpson_moment(int m, double z) {
  const int n = 20000;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = static_cast<double>(i) / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::pow(r, m) * std::exp(-z * r);
  }
  return s / (3.0 * n);
}

}  // namespace

TEST_CASE("exponential moments match direct quadrature") {
  for (int m : {0, 1, 2}) {
    for (double z : {0.0, 1e-9, 1e-3, 0.3, 0.999, 1.0, 1.001, 5.0, 40.0, 800.0}) {
      const double ref = simpson_moment(m, z);
      CHECK(exp_moment(m, z) == doctest::Approx(ref).epsilon(z > 100 ? 1e-6 : 1e-10));
    }
  }
  CHECK(exp_moment(0, 0.0) == 1.0);
  CHECK(exp_moment(2, 0.0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("quadrature names round-trip") {
  for (Quadrature q : {Quadrature::exp_linear, Quadrature::left_endpoint}) {
    CHECK(parse_quadrature(to_string(q)) == q);
    CHECK_FALSE(describe(q).empty());
  }
  CHECK_THROWS_AS(parse_quadrature("trapezoid"), ConfigError);
}

TEST_CASE("linear flow without buoyancy is the heat flow") {
  const InitialData d = gaussian_data();
  const FlowState s = linear_flow(d.u, ScalarField(grid()), 0.4);
  CHECK(rel_l2(s.u, heat_semigroup(d.u, 0.4)) < 1e-14);
  CHECK(lp_norm(s.theta, kInf) == 0.0);
}

TEST_CASE("linear flow of pure buoyancy") {
  const InitialData d = gaussian_data();
  const VectorField zero(grid());
  const double t = 0.3;
  const FlowState s = linear_flow(zero, d.theta, t);
  const VectorField e3{ScalarField(grid()), ScalarField(grid()), d.theta};
  const VectorField ref = heat_semigroup(leray_project(e3), t);
  CHECK(lp_norm(s.u, 2.0) == doctest::Approx(t * lp_norm(ref, 2.0)).epsilon(1e-12));
  CHECK(div_ratio(s.u) < 1e-10);
  CHECK(rel_l2(s.theta, heat_semigroup(d.theta, t)) < 1e-14);
}

TEST_CASE("buoyancy integral converges to the closed form") {
  const InitialData d = gaussian_data();
  const VectorField zero(grid());
  const double t = 0.5;
  const FlowState exact = linear_flow(zero, d.theta, t, LinearForm::IEE);
  for (Quadrature q : {Quadrature::left_endpoint, Quadrature::exp_linear}) {
    std::vector<double> err;
    for (std::size_t steps : {4u, 8u, 16u}) {
      err.push_back(rel_l2(linear_flow(zero, d.theta, t, LinearForm::IE, steps, q).u, exact.u));
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK(std::log2(err[1] / err[2]) >= 1.0);
  }
}

TEST_CASE("bilinear operators vanish on a zero argument") {
  const Trajectory a = heat_pair(1, 1.0, 8);
  const Trajectory zero = zero_trajectory(grid(), a.dt, a.steps());
  for (std::size_t j = 0; j <= a.steps(); ++j) {
    CHECK(lp_norm(B1(zero, a, j), kInf) == 0.0);
    CHECK(lp_norm(B1(a, zero, j), kInf) == 0.0);
    CHECK(lp_norm(B2(a, zero, j), kInf) == 0.0);
    CHECK(lp_norm(B3(zero, a, j), kInf) == 0.0);
  }
}

TEST_CASE("bilinear operators are bilinear") {
  const Trajectory a = heat_pair(2, 1.0, 8);
  const Trajectory b = heat_pair(3, 1.0, 8);
  const Trajectory c = heat_pair(4, 1.0, 8);
  const double alpha = 0.7, beta = -1.3;
  const Trajectory ab = add(add(zero_trajectory(grid(), a.dt, a.steps()), a, alpha), b, beta);
  const std::size_t j = a.steps();
  for (Quadrature q : {Quadrature::exp_linear, Quadrature::left_endpoint}) {
    CHECK(rel_l2(B1(ab, c, j, q), alpha * to_real(B1(a, c, j, q)) + beta * to_real(B1(b, c, j, q))) <
          1e-10);
    CHECK(rel_l2(B1(c, ab, j, q), alpha * to_real(B1(c, a, j, q)) + beta * to_real(B1(c, b, j, q))) <
          1e-10);
    CHECK(rel_l2(B2(ab, c, j, q), alpha * to_real(B2(a, c, j, q)) + beta * to_real(B2(b, c, j, q))) <
          1e-10);
    CHECK(rel_l2(B2(c, ab, j, q), alpha * to_real(B2(c, a, j, q)) + beta * to_real(B2(c, b, j, q))) <
          1e-10);
    CHECK(rel_l2(B3(ab, c, j, q), alpha * to_real(B3(a, c, j, q)) + beta * to_real(B3(b, c, j, q))) <
          1e-10);
    CHECK(rel_l2(B3(c, ab, j, q), alpha * to_real(B3(c, a, j, q)) + beta * to_real(B3(c, b, j, q))) <
          1e-10);
  }
}

TEST_CASE("B1 and B2 are divergence-free and B3 has zero mean") {
  const Trajectory a = heat_pair(5, 1.0, 8);
  const Trajectory b = heat_pair(6, 1.0, 8);
  const auto b1 = B1_all(a, b);
  const auto b2 = B2_all(a, b);
  const auto b3 = B3_all(a, b);
  REQUIRE(b1.size() == a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(div_ratio(b1[j]) < 1e-10);
    CHECK(div_ratio(b2[j]) < 1e-10);
    CHECK(std::abs(to_spectral(b3[j]).modes()[0]) <= 1e-15 * (1.0 + lp_norm(b3[j], kInf)));
    if (j > 0) CHECK(rel_l2(B1(a, b, j), b1[j]) <= 1e-14);
  }
  CHECK(lp_norm(b1[0], kInf) == 0.0);
}

TEST_CASE("pair operator assembles the three maps") {
  const Trajectory v = heat_pair(7, 1.0, 8);
  const Trajectory w = heat_pair(8, 1.0, 8);
  const PairOperatorResult r = pair_operator(v, w);
  const auto b1 = B1_all(v, w);
  const auto b2 = B2_all(v, w);
  const auto b3 = B3_all(v, w);
  const std::size_t j = v.steps();
  CHECK(rel_l2(r.u[j], to_real(b1[j]) + to_real(b2[j])) < 1e-13);
  CHECK(rel_l2(r.theta[j], b3[j]) < 1e-13);
}

TEST_CASE("B1 of a Taylor-Green heat flow matches the small-time expansion") {
  const Grid3 g = make_grid(16, 2.0 * 3.141592653589793);
  DataSpec spec;
  spec.preset = Preset::taylor_green;
  spec.amplitude = 1.0;
  const InitialData d = make_initial_data(g, spec);
  const auto band = band_velocity(to_spectral(d.u));
  const VectorField n0 = projected_advection(band, band);
  std::vector<double> err;
  for (double t : {0.04, 0.02, 0.01}) {
    const Trajectory u = linear_flow_trajectory(d.u, ScalarField(g), t / 8.0, 8);
    const VectorField b = B1(u, u, 8);
    err.push_back(lp_norm(to_real(b) + t * to_real(n0), 2.0));
  }
  CHECK(lp_norm(n0, 2.0) > 0.1);
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("self-convergence orders of the two quadratures") {
  const InitialData d = gaussian_data(1.0);
  const double T = 1.0;
  auto traj = [&](std::size_t m) { return linear_flow_trajectory(d.u, d.theta, T / m, m); };
  const Trajectory t1 = traj(16), t2 = traj(32), t3 = traj(64);
  // Observed orders approach the nominal one from below; 0.01 absorbs the pre-asymptotic gap.
  struct Case {
    Quadrature q;
    double min_order;
  };
  for (Case c : {Case{Quadrature::left_endpoint, 1.0}, Case{Quadrature::exp_linear, 2.0}}) {
    const VectorField a1 = to_real(B1(t1, t1, 16, c.q)), a2 = to_real(B1(t2, t2, 32, c.q)),
                      a3 = to_real(B1(t3, t3, 64, c.q));
    const double r1 = std::log2(lp_norm(a1 - a2, 2.0) / lp_norm(a2 - a3, 2.0));
    CHECK(r1 >= c.min_order - 0.01);
    const ScalarField s1 = to_real(B3(t1, t1, 16, c.q)), s2 = to_real(B3(t2, t2, 32, c.q)),
                      s3 = to_real(B3(t3, t3, 64, c.q));
    const double r3 = std::log2(lp_norm(s1 - s2, 2.0) / lp_norm(s2 - s3, 2.0));
    CHECK(r3 >= c.min_order - 0.01);
    const VectorField w1 = to_real(B2(t1, t1, 16, c.q)), w2 = to_real(B2(t2, t2, 32, c.q)),
                      w3 = to_real(B2(t3, t3, 64, c.q));
    const double r2 = std::log2(lp_norm(w1 - w2, 2.0) / lp_norm(w2 - w3, 2.0));
    CHECK(r2 >= c.min_order - 0.01);
  }
}

TEST_CASE("IE and IEE forms agree on a solved trajectory") {
  const InitialData d = gaussian_data();
  std::vector<double> disc;
  for (double dt : {1.0 / 16.0, 1.0 / 32.0}) {
    SolveConfig cfg;
    cfg.horizon = 1.0;
    cfg.dt = dt;
    const Solution sol = picard_solve(d.u, d.theta, cfg);
    const Trajectory& traj = sol.trajectory;
    const auto buoy = buoyancy_integral_all(traj);
    const auto b2 = B2_all(traj, traj);
    double worst = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
      const double t = traj.elapsed(j);
      const VectorField ie = to_real(heat_semigroup(d.u, t)) + to_real(buoy[j]);
      const VectorField iee = to_real(linear_flow(d.u, d.theta, t).u) + to_real(b2[j]);
      worst = std::max(worst, lp_norm(ie - iee, 2.0));
      scale = std::max(scale, lp_norm(traj.u[j], 2.0));
    }
    CHECK(worst <= 5e-3 * scale);
    disc.push_back(worst);
  }
  CHECK(std::log2(disc[0] / disc[1]) >= 1.0);
}

TEST_CASE("time grid mismatch is rejected") {
  const Trajectory a = heat_pair(9, 1.0, 8);
  const Trajectory b = heat_pair(10, 1.0, 16);
  CHECK_THROWS_AS(B1(a, b, 2), FieldMismatch);
  CHECK_THROWS_AS(pair_operator(a, b), FieldMismatch);
}

TEST_CASE("non-solenoidal data are projected") {
  const VectorField raw = random_vector(grid(), 77);
  const VectorField fixed = ensure_solenoidal(raw);
  CHECK(div_ratio(fixed) < 1e-10);
  const VectorField clean = ensure_solenoidal(fixed);
  CHECK(rel_l2(clean, fixed) < 1e-14);
}
