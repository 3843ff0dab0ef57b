#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bmild/data.hpp"
#include "bmild/error.hpp"
#include "bmild/norms.hpp"
#include "bmild/spectral.hpp"
#include "bmild/trajectory.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bmild;
using namespace bmild::test;
using std::numbers::pi;

TEST_CASE("L^p norm closed forms") {
  const Grid3 g = make_grid(32, 4.0);
  const ScalarField cube = sample(g, [](double x, double y, double z) {
    return (x >= 0 && x < 1 && y >= 0 && y < 1 && z >= 0 && z < 1) ? 1.0 : 0.0;
  });
  CHECK(lp_norm(cube, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  ScalarField c(g);
  for (double& v : c.values()) v = -1.5;
  for (double p : {1.0, 2.0, 3.0, 7.5}) {
    CHECK(lp_norm(c, p) == doctest::Approx(1.5 * std::pow(4.0, 3.0 / p)).epsilon(1e-12));
  }
  CHECK(lp_norm(c, kInf) == 1.5);

  const Grid3 big = make_grid(64, 20.0);
  const ScalarField gauss =
      sample(big, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
  CHECK(std::abs(lp_norm(gauss, 2.0) - std::pow(pi / 2.0, 0.75)) <= 1e-6);
  CHECK_THROWS_AS(lp_norm(gauss, 0.5), ConfigError);
}

TEST_CASE("vector L^p norms use the Euclidean magnitude") {
  const Grid3 g = make_grid(16, 2.0);
  VectorField v(g);
  for (double& x : v[0].values()) x = 3.0;
  for (double& x : v[2].values()) x = -4.0;
  CHECK(lp_norm(v, kInf) == doctest::Approx(5.0));
  CHECK(lp_norm(v, 2.0) == doctest::Approx(5.0 * std::sqrt(8.0)));
  CHECK(lp_norm(to_spectral(v), 2.0) == doctest::Approx(5.0 * std::sqrt(8.0)));
}

TEST_CASE("weak L^q norm closed forms") {
  const Grid3 g = make_grid(32, 4.0);
  const ScalarField cube = sample(g, [](double x, double y, double z) {
    return (x >= 0 && x < 1 && y >= 0 && y < 1 && z >= -1 && z < 1) ? 1.0 : 0.0;
  });
  for (double q : {1.0, 1.5, 3.0}) {
    CHECK(weak_lq_norm(cube, q) == doctest::Approx(std::pow(2.0, 1.0 / q)).epsilon(1e-12));
  }

  const Grid3 h = make_grid(64, 8.0);
  const double cap = 1.0 / (4.0 * h.dx());
  const ScalarField inv = sample(h, [&](double x, double y, double z) {
    const double r = std::sqrt(x * x + y * y + z * z);
    return r == 0.0 ? cap : std::min(1.0 / r, cap);
  });
  CHECK(weak_lq_norm(inv, 3.0) == doctest::Approx(std::cbrt(4.0 * pi / 3.0)).epsilon(0.02));
  CHECK_THROWS_AS(weak_lq_norm(inv, kInf), ConfigError);
}

TEST_CASE("weak norm never exceeds the strong norm") {
  const Grid3 g = make_grid(16, 3.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ScalarField f = random_scalar(g, seed);
    for (double q : {1.0, 1.5, 2.0, 3.0, 6.0}) {
      CHECK(weak_lq_norm(f, q) <= lp_norm(f, q) * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("Holder interpolation on random fields") {
  const Grid3 g = make_grid(16, 5.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScalarField f = random_scalar(g, 100 + seed);
    const double p0 = 1.0 + 2.0 * u(rng);
    const double p1 = seed % 2 ? kInf : p0 + 1.0 + 5.0 * u(rng);
    const double alpha = 0.1 + 0.8 * u(rng);
    const double inv_p = alpha / p0 + (1.0 - alpha) / p1;
    const double p = 1.0 / inv_p;
    CHECK(lp_norm(f, p) <=
          std::pow(lp_norm(f, p0), alpha) * std::pow(lp_norm(f, p1), 1.0 - alpha) + 1e-8);
  }
}

TEST_CASE("norm kinds validate exponents") {
  CHECK_THROWS_AS(make_norm_kind(NormFamily::Lp, 0.5), ConfigError);
  CHECK_THROWS_AS(make_norm_kind(NormFamily::Yqweak, 1.0), ConfigError);
  CHECK_THROWS_AS(make_norm_kind(NormFamily::Yqweak, kInf), ConfigError);
  CHECK_THROWS_AS(make_norm_kind(NormFamily::BesovHeat, 2.0, 0.0, 1.0), ConfigError);
  CHECK_NOTHROW(make_norm_kind(NormFamily::BesovHeat, 2.0, 1.5, 1.0));
  CHECK(velocity_norm(3.0).time_weight_exponent() == 0.0);
  CHECK(velocity_norm(kInf).time_weight_exponent() == doctest::Approx(0.5));
  CHECK(temperature_norm(2.0).time_weight_exponent() == doctest::Approx(0.75));
  CHECK(temperature_norm(1.0).time_weight_exponent() == 0.0);
}

TEST_CASE("trajectory norms of constant, heat-flow and zero trajectories") {
  const Grid3 g = make_grid(32, 16.0);
  const double a = 0.5;
  const ScalarField gauss = sample(
      g, [&](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z) / (4.0 * a)); });
  const VectorField u0(gauss, ScalarField(g), ScalarField(g));
  const double dt = 0.05;
  const std::size_t m = 20;

  std::vector<VectorField> same(m + 1, u0);
  std::vector<ScalarField> th(m + 1, ScalarField(g));
  const Trajectory constant = make_trajectory(g, dt, same, th);
  CHECK(trajectory_norm(constant, velocity_norm(3.0)).supremum ==
        doctest::Approx(lp_norm(u0, 3.0)).epsilon(1e-12));

  std::vector<VectorField> flow;
  for (std::size_t j = 0; j <= m; ++j) flow.push_back(to_real(heat_semigroup(u0, j * dt)));
  const Trajectory heat = make_trajectory(g, dt, flow, th);
  const NormProfile prof = trajectory_norm(heat, velocity_norm(kInf));
  REQUIRE(prof.samples.size() == m + 1);
  CHECK(prof.samples.front().weighted == 0.0);
  double sup = 0.0;
  for (std::size_t j = 1; j < prof.samples.size(); ++j) {
    const double t = prof.samples[j].t;
    const double closed = std::sqrt(t) * std::pow(a / (a + t), 1.5);
    CHECK(prof.samples[j].weighted == doctest::Approx(closed).epsilon(1e-8));
    CHECK(prof.samples[j].t > prof.samples[j - 1].t);
    sup = std::max(sup, prof.samples[j].weighted);
  }
  CHECK(prof.supremum == sup);
  for (std::size_t j = 2; j <= 5; ++j) {
    CHECK(prof.samples[j].weighted > prof.samples[j - 1].weighted);
  }
  CHECK(prof.limit_at_zero_estimate == prof.samples[1].weighted);

  const Trajectory zero = zero_trajectory(g, dt, m);
  for (const NormKind& k : {velocity_norm(4.0), temperature_norm(2.0),
                            make_norm_kind(NormFamily::KatoX, 3.0),
                            make_norm_kind(NormFamily::Yqweak, 2.0)}) {
    NormKind kind = k;
    if (k.family == NormFamily::Yqweak) kind.target = NormTarget::temperature;
    const NormProfile p = trajectory_norm(zero, kind);
    CHECK(p.supremum == 0.0);
    for (const auto& s : p.samples) CHECK(s.weighted == 0.0);
  }
}

TEST_CASE("Besov norm of zero, a Gaussian and a single mode") {
  const Grid3 g = make_grid(32, 16.0);
  const std::vector<double> ts = log_spaced(1e-4, 1.0, 64);
  CHECK(besov_norm(ScalarField(g), 1.5, 2.0, 1.0, ts).value == 0.0);

  const ScalarField gauss =
      sample(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
  const BesovEstimate b = besov_norm(gauss, 1.5, 2.0, 1.0, ts);
  CHECK(std::isfinite(b.value));
  CHECK(b.value > 0.0);
  CHECK(b.samples.front().weighted < 1e-2 * b.value);
  for (std::size_t j = 1; j < 10; ++j) CHECK(b.samples[j].weighted > b.samples[j - 1].weighted);

  const Grid3 h = make_grid(16, 2.0 * pi);
  const double k0 = 3.0;
  const ScalarField wave = sample(h, [&](double x, double, double) { return std::cos(k0 * x); });
  const double sigma = 1.0;
  const std::vector<double> dense = log_spaced(1e-3, 1.0, 400);
  const BesovEstimate w = besov_norm(wave, sigma, 2.0, 1.0, dense);
  const double t_star = sigma / (2.0 * k0 * k0);
  CHECK(w.argmax_t == doctest::Approx(t_star).epsilon(0.02));
  CHECK(w.value == doctest::Approx(std::sqrt(t_star) * std::exp(-t_star * k0 * k0) *
                                   lp_norm(wave, 2.0))
                       .epsilon(1e-4));
  CHECK_THROWS_AS(besov_norm(wave, 0.0, 2.0, 1.0, dense), ConfigError);
  CHECK_THROWS_AS(besov_norm(wave, 1.0, 2.0, 0.5, dense), ConfigError);
}

TEST_CASE("scaled data keep their critical norms") {
  const Grid3 g = make_grid(32, 12.0);
  DataSpec spec;
  const InitialData base = make_initial_data(g, spec);
  for (double lambda : {0.75, 1.5, 2.0}) {
    const InitialData s = make_initial_data(g, spec, lambda);
    CHECK(s.u.grid().box_length() == doctest::Approx(12.0 / lambda));
    CHECK(lp_norm(s.u, 3.0) == doctest::Approx(lp_norm(base.u, 3.0)).epsilon(1e-12));
    CHECK(lp_norm(s.theta, 1.0) == doctest::Approx(lp_norm(base.theta, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("vanishing diagnostic and profile merge") {
  NormProfile p;
  p.kind = temperature_norm(2.0);
  for (int j = 0; j <= 10; ++j) {
    const double t = 0.1 * j;
    p.samples.push_back({t, t, t * t});
  }
  p.supremum = p.sup_weighted = 1.0;
  p.sup_value = 1.0;
  const VanishingDiagnostic d = diagnose_vanishing(p, 0.05);
  CHECK(d.monotone);
  CHECK(d.ratio == doctest::Approx(0.01));
  CHECK(d.vanishing);
  CHECK_FALSE(diagnose_vanishing(p, 0.001).vanishing);

  NormProfile q = p;
  for (auto& s : q.samples) s.t += 0.05;
  const NormProfile merged = merge_profiles({p, q});
  CHECK(merged.samples.size() == p.samples.size() + q.samples.size());
  CHECK(std::is_sorted(merged.samples.begin(), merged.samples.end(),
                       [](const NormSample& a, const NormSample& b) { return a.t < b.t; }));

  const std::vector<double> ls = log_spaced(1e-3, 1.0, 4);
  REQUIRE(ls.size() == 4);
  CHECK(ls.front() == doctest::Approx(1e-3));
  CHECK(ls[1] == doctest::Approx(1e-2));
  CHECK(ls.back() == doctest::Approx(1.0));
}
