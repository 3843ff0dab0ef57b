#include "bmild/data.hpp"

#include <cmath>
#include <random>

#include "bmild/error.hpp"
#include "bmild/norms.hpp"
#include "bmild/spectral.hpp"

namespace bmild {

std::string to_string(Preset p) {
  switch (p) {
    case Preset::zero: return "zero";
    case Preset::gaussian: return "gaussian";
    case Preset::taylor_green: return "taylor_green";
    case Preset::random_band_limited: return "random_band_limited";
  }
  return "unknown";
}

Preset parse_preset(const std::string& name) {
  if (name == "zero") return Preset::zero;
  if (name == "gaussian") return Preset::gaussian;
  if (name == "taylor_green") return Preset::taylor_green;
  if (name == "random_band_limited") return Preset::random_band_limited;
  throw ConfigError("unknown preset '" + name +
                    "' (expected zero, gaussian, taylor_green or random_band_limited)");
}

namespace {

void gaussian_data(const Grid3& g, const DataSpec& spec, InitialData& d) {
  const double l = spec.length_scale;
  const double inv = 1.0 / (2.0 * l * l);
  // Swirl centers and the temperature offset, in units of the length scale.
  const double c1[3] = {0.4 * l, -0.3 * l, 0.2 * l};
  const double c2[3] = {-0.5 * l, 0.35 * l, -0.25 * l};
  const double c3[3] = {0.3 * l, 0.2 * l, -0.4 * l};
  // e^{1/2}/l makes the swirl peak |u| = A on the ring of radius l.
  const double a = spec.amplitude * std::exp(0.5) / l;
  const int n = g.n();
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const double x = g.coordinate(ix), y = g.coordinate(iy), z = g.coordinate(iz);
        const double d1[3] = {x - c1[0], y - c1[1], z - c1[2]};
        const double d2[3] = {x - c2[0], y - c2[1], z - c2[2]};
        const double d3[3] = {x - c3[0], y - c3[1], z - c3[2]};
        const double g1 = a * std::exp(-(d1[0] * d1[0] + d1[1] * d1[1] + d1[2] * d1[2]) * inv);
        const double g2 = a * std::exp(-(d2[0] * d2[0] + d2[1] * d2[1] + d2[2] * d2[2]) * inv);
        // Swirl about e3 centered at c1 and about e1 centered at c2.
        d.u[0].at(ix, iy, iz) = -d1[1] * g1;
        d.u[1].at(ix, iy, iz) = d1[0] * g1 - d2[2] * g2;
        d.u[2].at(ix, iy, iz) = d2[1] * g2;
        d.theta.at(ix, iy, iz) =
            spec.theta_amplitude * std::exp(-(d3[0] * d3[0] + d3[1] * d3[1] + d3[2] * d3[2]) * inv);
      }
    }
  }
}

void taylor_green_data(const Grid3& g, const DataSpec& spec, InitialData& d) {
  const double m = std::max(1.0, std::round(g.box_length() / (2.0 * M_PI * spec.length_scale)));
  const double k = m * g.k0();
  const int n = g.n();
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const double x = k * g.coordinate(ix), y = k * g.coordinate(iy), z = k * g.coordinate(iz);
        d.u[0].at(ix, iy, iz) = spec.amplitude * std::sin(x) * std::cos(y) * std::cos(z);
        d.u[1].at(ix, iy, iz) = -spec.amplitude * std::cos(x) * std::sin(y) * std::cos(z);
        d.theta.at(ix, iy, iz) = spec.theta_amplitude * std::cos(x) * std::cos(y) * std::cos(z);
      }
    }
  }
}

ScalarField filtered_noise(const Grid3& g, double l, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ScalarField f(g);
  for (auto& v : f.values()) v = normal(rng);
  ScalarField s = transform(f);
  auto modes = s.modes();
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    modes[idx] *= std::exp(-0.5 * wavevector(g, ix, iy, iz).k2 * l * l);
  });
  modes[0] = 0.0;
  return s;
}

void random_data(const Grid3& g, const DataSpec& spec, InitialData& d) {
  std::mt19937_64 rng(spec.seed);
  VectorField u(g, Representation::spectral);
  for (int a = 0; a < 3; ++a) u[a] = filtered_noise(g, spec.length_scale, rng);
  u = to_real(leray_project(u));
  ScalarField theta = inverse_transform(filtered_noise(g, spec.length_scale, rng));
  const double umax = lp_norm(u, kInf);
  const double tmax = lp_norm(theta, kInf);
  if (umax > 0.0) u *= spec.amplitude / umax;
  if (tmax > 0.0) theta *= spec.theta_amplitude / tmax;
  d.u = std::move(u);
  d.theta = std::move(theta);
}

}  // namespace

InitialData make_initial_data(const Grid3& grid, const DataSpec& spec, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("scaling factor must be positive");
  if (!(spec.length_scale > 0.0)) throw ConfigError("length scale must be positive");
  if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.theta_amplitude)) {
    throw ConfigError("amplitudes must be finite");
  }
  InitialData d{VectorField(grid), ScalarField(grid)};
  switch (spec.preset) {
    case Preset::zero: break;
    case Preset::gaussian:
      gaussian_data(grid, spec, d);
      d.u = to_real(leray_project(d.u));
      break;
    case Preset::taylor_green: taylor_green_data(grid, spec, d); break;
    case Preset::random_band_limited: random_data(grid, spec, d); break;
  }
  d.u.divergence_free = true;
  if (lambda == 1.0) return d;
  // Same samples on the box L/lambda: x_i / lambda there is x_i here.
  const Grid3 scaled = make_grid(grid.n(), grid.box_length() / lambda);
  InitialData out{VectorField(scaled), ScalarField(scaled)};
  for (int a = 0; a < 3; ++a) {
    auto src = d.u[a].values();
    auto dst = out.u[a].values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = lambda * src[i];
  }
  auto src = d.theta.values();
  auto dst = out.theta.values();
  const double l3 = lambda * lambda * lambda;
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = l3 * src[i];
  out.u.divergence_free = true;
  return out;
}

}  // namespace bmild
