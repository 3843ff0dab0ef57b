#pragma once

#include <cstdint>
#include <string>

#include "bmild/field.hpp"
#include "bmild/grid.hpp"

namespace bmild {

enum class Preset { zero, gaussian, taylor_green, random_band_limited };

std::string to_string(Preset p);
Preset parse_preset(const std::string& name);

struct DataSpec {
  Preset preset = Preset::gaussian;
  double amplitude = 0.1;        // velocity amplitude
  double theta_amplitude = 0.1;  // temperature amplitude
  double length_scale = 1.0;
  std::uint64_t seed = 0;
};

struct InitialData {
  VectorField u;
  ScalarField theta;
};

/// Samples the preset on the box of side L/lambda with n points per axis, rescaled as
/// u_lambda(x) = lambda u0(lambda x), theta_lambda(x) = lambda^3 theta0(lambda x), where
/// (u0, theta0) is the preset on `grid`. lambda = 1 gives the preset itself. The velocity
/// is divergence-free; both fields are real.
///
///  gaussian             two swirls exp(-|x-c|^2/(2 l^2)) around non-parallel axes, and an
///                       offset Gaussian temperature; amplitudes are the peak values.
///  taylor_green         u = A(sin kx cos ky cos kz, -cos kx sin ky cos kz, 0) and
///                       theta = A_theta cos kx cos ky cos kz, with k the grid mode nearest 1/l.
///  random_band_limited  white noise filtered by exp(-(k l)^2/2), projected, scaled so that
///                       the maximum of |u| (resp. |theta|) is the amplitude.
InitialData make_initial_data(const Grid3& grid, const DataSpec& spec, double lambda = 1.0);

}  // namespace bmild
