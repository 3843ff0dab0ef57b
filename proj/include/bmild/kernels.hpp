#pragma once

#include <vector>

#include "bmild/field.hpp"
#include "bmild/grid.hpp"

namespace bmild {

/// Which convolution kernel to build.
///  oseen        K(x,t), kernel of e^{t Lap} P            (3x3)
///  projected_div F(x,t), kernel of e^{t Lap} P div       (3x3x3, index (i,j,l))
///  plain_div    kernel of e^{t Lap} div, no projection   (3, index l)
///  heat         Gaussian heat kernel                      (1)
enum class KernelKind { oseen, projected_div, plain_div, heat };

/// Physical-space kernel samples on a grid, centered on sample 0.
///
/// The mean mode of the Oseen multiplier is set to (2/3) delta_ij, the isotropic
/// average of the whole-space kernel, so that the periodized kernel carries the same
/// mass as on R^3; away from k = 0 the multipliers match the projector exactly.
struct KernelField {
  Grid3 grid;
  double t;
  KernelKind kind;
  std::vector<ScalarField> components;
  ScalarField magnitude;  // pointwise Frobenius norm over the component indices

  const ScalarField& oseen(int i, int j) const;
  const ScalarField& projected_div(int i, int j, int l) const;
  const ScalarField& plain_div(int l) const;
};

/// Self-similar decay exponents: kernel(x,t) = t^{-a} kernel(x/sqrt t, 1).
double similarity_exponent(KernelKind kind);

/// Resolution (sqrt t >= kKernelResolution * dx) and containment (sqrt t <= L/20) checks.
inline constexpr double kKernelResolution = 0.75;
void check_kernel_resolution(const Grid3& grid, double t);

KernelField kernel_K(const Grid3& grid, double t);
/// projected = false builds the kernel of e^{t Lap} div used by the temperature operator.
KernelField kernel_F(const Grid3& grid, double t, bool projected = true);
KernelField heat_kernel(const Grid3& grid, double t);

/// Convolution (dx^3 sum_y) of the Oseen kernel with a vector field.
VectorField convolve(const KernelField& oseen, const VectorField& v);
/// u_i = sum_{j,l} F_{ijl} * M_{lj} for the projected-divergence kernel.
VectorField convolve_matrix(const KernelField& f, const std::array<VectorField, 3>& rows);

/// Pointwise Frobenius magnitude built one component at a time; works at resolutions
/// where storing every component would not fit in memory (n = 256 for F).
ScalarField kernel_magnitude(KernelKind kind, const Grid3& grid, double t);

/// Max deviation  |k(x, t1) - s^{2a} k(s x, t2)|  over samples with |k(x,t1)| >= 1e-6 peak,
/// divided by the peak of |k(., t1)|, where s = sqrt(t2/t1). s (or 1/s) must be an integer
/// so the rescaled sample positions land on the grid.
double verify_self_similarity(KernelKind kind, const Grid3& grid, double t1, double t2);

struct DecayFit {
  double slope = 0.0;
  std::vector<double> radii;   // |x| of each shell maximum
  std::vector<double> maxima;  // shell maximum of the magnitude
};

/// Log-log least-squares slope of shell maxima of |k(x, 1)| over r_min <= |x| <= L/4.
DecayFit verify_decay(KernelKind kind, const Grid3& grid, double r_min = 5.0, int shells = 16);

struct PowerLawFit {
  double slope = 0.0;
  std::vector<double> times;
  std::vector<double> norms;
};

/// Fits log ||k(t)||_beta against log t over t_grid.
PowerLawFit kernel_lbeta_law(KernelKind kind, const Grid3& grid, double beta,
                             const std::vector<double>& t_grid);

/// ||e^{t Lap} P (theta0 e3)||_s for the unit-mass Gaussian theta0 = G_a, fitted against
/// log(t + a): e^{t Lap} G_a = G_{t+a} exactly, so the slope is -(3/2)(1 - 1/s) for the
/// r = 1 law.
PowerLawFit buoyancy_lp_law(const Grid3& grid, double gaussian_time, double s,
                            const std::vector<double>& t_grid);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bmild
