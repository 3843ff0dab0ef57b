#include "bmild/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bmild/error.hpp"
#include "bmild/spectral.hpp"

namespace bmild {

std::string to_string(BilinearOp op) {
  switch (op) {
    case BilinearOp::B1: return "B1";
    case BilinearOp::B2: return "B2";
    case BilinearOp::B3: return "B3";
  }
  return "B?";
}

namespace {

constexpr double kSlack = 1e-12;

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

void require_exponent(double p, const char* name) {
  if (!(p >= 1.0)) {
    throw ConfigError(std::string("exponent ") + name + " must satisfy 1 <= " + name + " <= inf");
  }
}

[[noreturn]] void violated(const std::string& estimate, const std::string& constraint) {
  throw ConfigError(estimate + " estimate: constraint " + constraint + " violated");
}

std::string fmt(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

EstimateSpec estimate_b1(double p0, double p1, double p2) {
  require_exponent(p0, "p0");
  require_exponent(p1, "p1");
  require_exponent(p2, "p2");
  const double s = inv(p1) + inv(p2);
  const std::string est = "B1 X_p1 x X_p2 -> X_p0";
  if (!(inv(p0) <= s + kSlack && s <= 1.0 + kSlack)) violated(est, "1/p0 <= 1/p1 + 1/p2 <= 1");
  if (!(s > 0.0 && s < 1.0 / 3.0 + inv(p0) - kSlack)) {
    violated(est, "0 < 1/p1 + 1/p2 < 1/3 + 1/p0");
  }
  return {"B1 X" + fmt(p1) + " x X" + fmt(p2) + " -> X" + fmt(p0), BilinearOp::B1,
          velocity_norm(p0), velocity_norm(p1), velocity_norm(p2)};
}

EstimateSpec estimate_b2(double p0, double p1, double q1) {
  require_exponent(p0, "p0");
  require_exponent(p1, "p1");
  require_exponent(q1, "q1");
  const double s = inv(p1) + inv(q1);
  const std::string est = "B2 X_p1 x Y_q1 -> X_p0";
  if (!(inv(p0) <= s + kSlack && s <= 1.0 + kSlack)) violated(est, "1/p0 <= 1/p1 + 1/q1 <= 1");
  if (!(s > 2.0 / 3.0 + kSlack && s < 1.0 + inv(p0) - kSlack)) {
    violated(est, "2/3 < 1/p1 + 1/q1 < 1 + 1/p0");
  }
  return {"B2 X" + fmt(p1) + " x Y" + fmt(q1) + " -> X" + fmt(p0), BilinearOp::B2,
          velocity_norm(p0), velocity_norm(p1), temperature_norm(q1)};
}

EstimateSpec estimate_b3(double q0, double p1, double q1) {
  require_exponent(q0, "q0");
  require_exponent(p1, "p1");
  require_exponent(q1, "q1");
  const double s = inv(p1) + inv(q1);
  const std::string est = "B3 X_p1 x Y_q1 -> Y_q0";
  if (!(inv(q0) <= s + kSlack && s <= 1.0 + kSlack)) violated(est, "1/q0 <= 1/p1 + 1/q1 <= 1");
  if (!(s > 2.0 / 3.0 + kSlack && s < 1.0 / 3.0 + inv(q0) - kSlack)) {
    violated(est, "2/3 < 1/p1 + 1/q1 < 1/3 + 1/q0");
  }
  return {"B3 X" + fmt(p1) + " x Y" + fmt(q1) + " -> Y" + fmt(q0), BilinearOp::B3,
          temperature_norm(q0), velocity_norm(p1), temperature_norm(q1)};
}

EstimateSpec estimate_b1_weak() {
  const NormKind x3w = make_norm_kind(NormFamily::X3weak, 3.0);
  return {"B1 X3,inf x X3,inf -> X3,inf", BilinearOp::B1, x3w, x3w, x3w};
}

EstimateSpec estimate_b2_weak(double q) {
  if (!(inv(q) > 1.0 / 3.0 + kSlack && inv(q) < 2.0 / 3.0 - kSlack)) {
    violated("B2 X_{3,inf} x Y_{q,inf} -> X_{3,inf}", "1/3 < 1/q < 2/3");
  }
  const NormKind x3w = make_norm_kind(NormFamily::X3weak, 3.0);
  return {"B2 X3,inf x Y" + fmt(q) + ",inf -> X3,inf", BilinearOp::B2, x3w, x3w,
          make_norm_kind(NormFamily::Yqweak, q)};
}

EstimateSpec estimate_b3_weak(double q) {
  if (!(q > 1.5 + kSlack && q < 3.0 - kSlack)) {
    violated("B3 X_{3,inf} x Y_{q,inf} -> Y_{q,inf}", "3/2 < q < 3");
  }
  const NormKind yqw = make_norm_kind(NormFamily::Yqweak, q);
  return {"B3 X3,inf x Y" + fmt(q) + ",inf -> Y" + fmt(q) + ",inf", BilinearOp::B3, yqw,
          make_norm_kind(NormFamily::X3weak, 3.0), yqw};
}

EstimateSpec estimate_b3_mixed(double p, double q) {
  require_exponent(p, "p");
  const double s = inv(p) + inv(q);
  const std::string est = "B3 X_p x Y_{q,inf} -> Y_{q,inf}";
  if (!(s < 1.0 - kSlack)) violated(est, "1/p + 1/q < 1");
  if (!(s > 2.0 / 3.0 + kSlack && s < 1.0 / 3.0 + inv(q) - kSlack)) {
    violated(est, "2/3 < 1/p + 1/q < 1/3 + 1/q");
  }
  const NormKind yqw = make_norm_kind(NormFamily::Yqweak, q);
  return {"B3 X" + fmt(p) + " x Y" + fmt(q) + ",inf -> Y" + fmt(q) + ",inf", BilinearOp::B3, yqw,
          velocity_norm(p), yqw};
}

Trajectory random_heat_trajectory(const Grid3& grid, double horizon, std::size_t steps,
                                  std::mt19937_64& rng, const RandomTrajectoryOptions& opts) {
  if (opts.blobs < 1 || !(opts.min_width > 0.0) || !(opts.max_width >= opts.min_width)) {
    throw ConfigError("random trajectory needs blobs >= 1 and 0 < min_width <= max_width");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  const double box = grid.box_length();
  VectorField u(grid);
  ScalarField theta(grid);
  const int n = grid.n();
  auto add_blobs = [&](auto&& deposit) {
    for (int b = 0; b < opts.blobs; ++b) {
      const double w = opts.min_width * std::pow(opts.max_width / opts.min_width, unit(rng));
      const double c[3] = {(unit(rng) - 0.5) * box / 4.0, (unit(rng) - 0.5) * box / 4.0,
                           (unit(rng) - 0.5) * box / 4.0};
      const double amp[3] = {normal(rng), normal(rng), normal(rng)};
      const double inv2 = 1.0 / (2.0 * w * w);
      for (int iz = 0; iz < n; ++iz) {
        for (int iy = 0; iy < n; ++iy) {
          for (int ix = 0; ix < n; ++ix) {
            const double dx = grid.coordinate(ix) - c[0];
            const double dy = grid.coordinate(iy) - c[1];
            const double dz = grid.coordinate(iz) - c[2];
            deposit(ix, iy, iz, amp, std::exp(-(dx * dx + dy * dy + dz * dz) * inv2));
          }
        }
      }
    }
  };
  add_blobs([&](int ix, int iy, int iz, const double* amp, double g) {
    for (int a = 0; a < 3; ++a) u[a].at(ix, iy, iz) += amp[a] * g;
  });
  add_blobs([&](int ix, int iy, int iz, const double* amp, double g) {
    theta.at(ix, iy, iz) += amp[0] * g;
  });
  const VectorField u0 = leray_project(u);
  const ScalarField th0 = transform(theta);
  const double dt = horizon / static_cast<double>(steps);
  std::vector<VectorField> us;
  std::vector<ScalarField> ths;
  for (std::size_t j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) * dt;
    us.push_back(heat_semigroup(u0, t));
    us.back().divergence_free = true;
    ths.push_back(heat_semigroup(th0, t));
  }
  return make_trajectory(grid, dt, std::move(us), std::move(ths));
}

namespace {

double argument_norm(const Trajectory& traj, const NormKind& kind) {
  return trajectory_norm(traj, kind).supremum;
}

double output_norm(const EstimateSpec& spec, const Trajectory& a, const Trajectory& b,
                   Quadrature quadrature) {
  switch (spec.op) {
    case BilinearOp::B1: return sequence_norm(B1_all(a, b, quadrature), a.dt, spec.out).supremum;
    case BilinearOp::B2: return sequence_norm(B2_all(a, b, quadrature), a.dt, spec.out).supremum;
    case BilinearOp::B3: return sequence_norm(B3_all(a, b, quadrature), a.dt, spec.out).supremum;
  }
  return 0.0;
}

}  // namespace

BilinearStats measure_bilinear_constant(const EstimateSpec& spec, const Grid3& grid, double horizon,
                                        std::size_t steps, std::size_t sample_count,
                                        std::uint64_t seed, Quadrature quadrature,
                                        const RandomTrajectoryOptions& opts) {
  if (sample_count == 0) throw ConfigError("bilinear constant needs at least one sample");
  if (!(horizon > 0.0)) throw ConfigError("bilinear constant horizon must be positive");
  BilinearStats stats;
  stats.spec = spec;
  stats.horizon = horizon;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < sample_count; ++s) {
    const Trajectory a = random_heat_trajectory(grid, horizon, steps, rng, opts);
    const Trajectory b = random_heat_trajectory(grid, horizon, steps, rng, opts);
    const double na = argument_norm(a, spec.in1);
    const double nb = argument_norm(b, spec.in2);
    if (na == 0.0 || nb == 0.0) continue;
    stats.ratios.push_back(output_norm(spec, a, b, quadrature) / (na * nb));
  }
  if (!stats.ratios.empty()) {
    stats.max = *std::max_element(stats.ratios.begin(), stats.ratios.end());
    stats.mean = std::accumulate(stats.ratios.begin(), stats.ratios.end(), 0.0) /
                 static_cast<double>(stats.ratios.size());
  }
  return stats;
}

double e_norm(const Trajectory& v, double p, double q) {
  return trajectory_norm(v, velocity_norm(p)).supremum +
         trajectory_norm(v, temperature_norm(q)).supremum;
}

double measure_pair_constant(const Grid3& grid, double horizon, std::size_t steps, double p,
                             double q, std::size_t sample_count, std::uint64_t seed,
                             const std::vector<const Trajectory*>& extra, Quadrature quadrature,
                             const RandomTrajectoryOptions& opts) {
  double best = 0.0;
  auto pair_ratio = [&](const Trajectory& v, const Trajectory& w) {
    const double nv = e_norm(v, p, q);
    const double nw = e_norm(w, p, q);
    if (nv == 0.0 || nw == 0.0) return;
    const auto b = pair_operator(v, w, quadrature);
    const double nb = sequence_norm(b.u, v.dt, velocity_norm(p)).supremum +
                      sequence_norm(b.theta, v.dt, temperature_norm(q)).supremum;
    best = std::max(best, nb / (nv * nw));
  };
  for (const Trajectory* x : extra) pair_ratio(*x, *x);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < sample_count; ++s) {
    const Trajectory v = random_heat_trajectory(grid, horizon, steps, rng, opts);
    const Trajectory w = random_heat_trajectory(grid, horizon, steps, rng, opts);
    pair_ratio(v, w);
    pair_ratio(v, v);
  }
  return best;
}

}  // namespace bmild
