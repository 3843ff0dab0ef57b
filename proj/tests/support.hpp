#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "bmild/field.hpp"
#include "bmild/grid.hpp"
#include "bmild/norms.hpp"
#include "bmild/spectral.hpp"

namespace bmild::test {

inline ScalarField random_scalar(const Grid3& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (double& v : f.values()) v = d(rng);
  return f;
}

inline VectorField random_vector(const Grid3& g, std::uint64_t seed) {
  return VectorField(random_scalar(g, seed), random_scalar(g, seed + 101),
                     random_scalar(g, seed + 202));
}

// Random field with every |mode| <= cutoff per axis, real representation.
inline ScalarField band_scalar(const Grid3& g, std::uint64_t seed, int cutoff) {
  ScalarField s = transform(random_scalar(g, seed));
  auto m = s.modes();
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    if (std::abs(g.signed_index(ix)) > cutoff || std::abs(g.signed_index(iy)) > cutoff ||
        std::abs(g.signed_index(iz)) > cutoff || ix == g.n() / 2) {
      m[idx] = 0.0;
    }
  });
  return inverse_transform(s);
}

inline VectorField band_vector(const Grid3& g, std::uint64_t seed, int cutoff) {
  return VectorField(band_scalar(g, seed, cutoff), band_scalar(g, seed + 101, cutoff),
                     band_scalar(g, seed + 202, cutoff));
}

inline VectorField solenoidal_band(const Grid3& g, std::uint64_t seed, int cutoff) {
  return to_real(leray_project(band_vector(g, seed, cutoff)));
}

// Subtract the mean so kernel and multiplier paths agree.
inline ScalarField mean_free(ScalarField f) {
  ScalarField s = to_spectral(f);
  s.modes()[0] = 0.0;
  return to_real(s);
}

inline VectorField mean_free(const VectorField& v) {
  return VectorField(mean_free(v[0]), mean_free(v[1]), mean_free(v[2]));
}

// Full-spectrum coefficient of integer mode (kx, ky, kz) from the half layout.
inline std::complex<double> mode_of(const ScalarField& spectral, int kx, int ky, int kz) {
  const Grid3& g = spectral.grid();
  const int n = g.n();
  auto wrap = [n](int k) { return ((k % n) + n) % n; };
  const bool conj = kx < 0;
  if (conj) {
    kx = -kx;
    ky = -ky;
    kz = -kz;
  }
  const auto c = spectral.modes()[g.spectral_index(wrap(kx), wrap(ky), wrap(kz))];
  return conj ? std::conj(c) : c;
}

inline double rel_l2(const ScalarField& a, const ScalarField& b) {
  return lp_norm(to_real(a) - to_real(b), 2.0) / lp_norm(b, 2.0);
}

inline double rel_l2(const VectorField& a, const VectorField& b) {
  return lp_norm(to_real(a) - to_real(b), 2.0) / lp_norm(b, 2.0);
}

inline double inner(const VectorField& a, const VectorField& b) {
  const VectorField ra = to_real(a);
  const VectorField rb = to_real(b);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto x = ra[i].values();
    const auto y = rb[i].values();
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  }
  return s * a.grid().cell_volume();
}

template <class Fn>
ScalarField sample(const Grid3& g, Fn&& fn) {
  ScalarField f(g);
  for (int iz = 0; iz < g.n(); ++iz) {
    for (int iy = 0; iy < g.n(); ++iy) {
      for (int ix = 0; ix < g.n(); ++ix) {
        f.at(ix, iy, iz) = fn(g.coordinate(ix), g.coordinate(iy), g.coordinate(iz));
      }
    }
  }
  return f;
}

}  // namespace bmild::test
