#pragma once

#include <cstddef>
#include <cstdlib>

#include "bmild/field.hpp"
#include "bmild/grid.hpp"

namespace bmild {

/// Visits every stored spectral coefficient as fn(index, ix, iy, iz).
template <class Fn>
void for_each_mode(const Grid3& g, Fn&& fn) {
  const int n = g.n();
  const int nh = g.half_n();
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < nh; ++ix, ++idx) fn(idx, ix, iy, iz);
    }
  }
}

/// Wavevector data of one stored mode.
struct Wavevector {
  double k[3];      // physical wavenumber
  double kd[3];     // derivative wavenumber (zero on Nyquist indices)
  double k2;        // |k|^2
  double kd2;       // |kd|^2
};

inline Wavevector wavevector(const Grid3& g, int ix, int iy, int iz) {
  Wavevector w{{g.wavenumber(ix), g.wavenumber(iy), g.wavenumber(iz)},
               {g.derivative_wavenumber(ix), g.derivative_wavenumber(iy),
                g.derivative_wavenumber(iz)},
               0.0,
               0.0};
  w.k2 = w.k[0] * w.k[0] + w.k[1] * w.k[1] + w.k[2] * w.k[2];
  w.kd2 = w.kd[0] * w.kd[0] + w.kd[1] * w.kd[1] + w.kd[2] * w.kd[2];
  return w;
}

inline bool inside_dealias_band(const Grid3& g, int ix, int iy, int iz) {
  const int cut = g.dealias_cutoff();
  return std::abs(g.signed_index(ix)) <= cut && std::abs(g.signed_index(iy)) <= cut &&
         std::abs(g.signed_index(iz)) <= cut;
}

/// e^{t Laplacian}: multiplies mode k by exp(-t|k|^2). Result keeps the input representation.
ScalarField heat_semigroup(const ScalarField& f, double t);
VectorField heat_semigroup(const VectorField& v, double t);

/// Leray projector (Id - k k^T/|k|^2); the mean mode passes through unchanged.
VectorField leray_project(const VectorField& v);

/// Partial derivative along axis (0, 1, 2).
ScalarField partial(const ScalarField& f, int axis);
ScalarField divergence(const VectorField& v);
VectorField gradient(const ScalarField& f);

/// Zeroes every mode outside the 2/3 band. Spectral result.
ScalarField dealias(const ScalarField& f);

/// Pointwise product of the band-limited parts of a and b, truncated to the band.
/// Spectral result.
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);

/// Real-space samples of the band-limited part of f; the operand form consumed by
/// product_to_spectral.
ScalarField band_limited_samples(const ScalarField& f);
/// a and b must be real band-limited samples; returns the truncated spectral product.
ScalarField product_to_spectral(const ScalarField& a, const ScalarField& b);

}  // namespace bmild
