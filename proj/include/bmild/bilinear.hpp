#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bmild/duhamel.hpp"
#include "bmild/norms.hpp"

namespace bmild {

enum class BilinearOp { B1, B2, B3 };

std::string to_string(BilinearOp op);

/// ||B(a, b)||_out <= C ||a||_in1 ||b||_in2, with a the velocity argument.
struct EstimateSpec {
  std::string name;
  BilinearOp op = BilinearOp::B1;
  NormKind out;
  NormKind in1;
  NormKind in2;
};

// Constructors validate the admissible exponent ranges and throw ConfigError naming the
// violated constraint. Infinite exponents are passed as kInf.
EstimateSpec estimate_b1(double p0, double p1, double p2);  // X_p1 x X_p2 -> X_p0
EstimateSpec estimate_b2(double p0, double p1, double q1);  // X_p1 x Y_q1 -> X_p0
EstimateSpec estimate_b3(double q0, double p1, double q1);  // X_p1 x Y_q1 -> Y_q0
EstimateSpec estimate_b1_weak();                            // X_{3,inf}^2 -> X_{3,inf}
EstimateSpec estimate_b2_weak(double q);                    // X_{3,inf} x Y_{q,inf} -> X_{3,inf}
EstimateSpec estimate_b3_weak(double q);                    // X_{3,inf} x Y_{q,inf} -> Y_{q,inf}
EstimateSpec estimate_b3_mixed(double p, double q);         // X_p x Y_{q,inf} -> Y_{q,inf}

struct RandomTrajectoryOptions {
  int blobs = 3;
  double min_width = 1.0;
  double max_width = 3.0;
};

/// Heat flow (u, theta)(t) = e^{t Lap}(u0, theta0) of random sums of Gaussian blobs with
/// log-uniform widths; u0 is projected. Spectral fields on t_j = j T / steps.
Trajectory random_heat_trajectory(const Grid3& grid, double horizon, std::size_t steps,
                                  std::mt19937_64& rng, const RandomTrajectoryOptions& opts = {});

struct BilinearStats {
  EstimateSpec spec;
  double horizon = 0.0;
  std::vector<double> ratios;
  double max = 0.0;
  double mean = 0.0;
};

/// Ratios ||B(a,b)||_out / (||a||_in1 ||b||_in2) over sample_count independent random pairs.
BilinearStats measure_bilinear_constant(const EstimateSpec& spec, const Grid3& grid, double horizon,
                                        std::size_t steps, std::size_t sample_count,
                                        std::uint64_t seed,
                                        Quadrature quadrature = Quadrature::exp_linear,
                                        const RandomTrajectoryOptions& opts = {});

/// ||v||_E = ||u||_{X_p} + ||theta||_{Y_q}.
double e_norm(const Trajectory& v, double p, double q);

/// Empirical C0 of ||B(v, w)||_E <= C0 ||v||_E ||w||_E: the maximum ratio over random pairs
/// and over the pairs (x, x) for every trajectory in `extra`.
double measure_pair_constant(const Grid3& grid, double horizon, std::size_t steps, double p,
                             double q, std::size_t sample_count, std::uint64_t seed,
                             const std::vector<const Trajectory*>& extra = {},
                             Quadrature quadrature = Quadrature::exp_linear,
                             const RandomTrajectoryOptions& opts = {});

}  // namespace bmild
