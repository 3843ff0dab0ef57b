#include "bmild/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "bmild/error.hpp"

namespace bmild {

namespace {

template <class Multiplier>
ScalarField apply_multiplier(const ScalarField& f, Multiplier&& m) {
  ScalarField s = to_spectral(f);
  auto modes = s.modes();
  for_each_mode(s.grid(), [&](std::size_t idx, int ix, int iy, int iz) {
    modes[idx] *= m(wavevector(s.grid(), ix, iy, iz));
  });
  return f.is_real() ? inverse_transform(s) : s;
}

}  // namespace

ScalarField heat_semigroup(const ScalarField& f, double t) {
  if (t < 0.0) throw ConfigError("heat semigroup requires t >= 0");
  if (t == 0.0) return f;
  return apply_multiplier(f, [t](const Wavevector& w) { return Complex(std::exp(-t * w.k2)); });
}

VectorField heat_semigroup(const VectorField& v, double t) {
  VectorField out(heat_semigroup(v[0], t), heat_semigroup(v[1], t), heat_semigroup(v[2], t));
  out.divergence_free = v.divergence_free;
  return out;
}

VectorField leray_project(const VectorField& v) {
  const Grid3& g = v.grid();
  VectorField s = to_spectral(v);
  auto m0 = s[0].modes();
  auto m1 = s[1].modes();
  auto m2 = s[2].modes();
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    const Wavevector w = wavevector(g, ix, iy, iz);
    if (w.kd2 == 0.0) return;
    const Complex kv = (w.kd[0] * m0[idx] + w.kd[1] * m1[idx] + w.kd[2] * m2[idx]) / w.kd2;
    m0[idx] -= w.kd[0] * kv;
    m1[idx] -= w.kd[1] * kv;
    m2[idx] -= w.kd[2] * kv;
  });
  VectorField out = v.representation() == Representation::real ? inverse_transform(s) : s;
  out.divergence_free = true;
  return out;
}

ScalarField partial(const ScalarField& f, int axis) {
  if (axis < 0 || axis > 2) throw std::out_of_range("axis must be 0, 1 or 2");
  return apply_multiplier(f, [axis](const Wavevector& w) { return Complex(0.0, w.kd[axis]); });
}

ScalarField divergence(const VectorField& v) {
  ScalarField s0 = to_spectral(v[0]);
  const ScalarField s1 = to_spectral(v[1]);
  const ScalarField s2 = to_spectral(v[2]);
  const Grid3& g = v.grid();
  auto out = s0.modes();
  auto b = s1.modes();
  auto c = s2.modes();
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    const Wavevector w = wavevector(g, ix, iy, iz);
    out[idx] = Complex(0.0, 1.0) * (w.kd[0] * out[idx] + w.kd[1] * b[idx] + w.kd[2] * c[idx]);
  });
  return v.representation() == Representation::real ? inverse_transform(s0) : s0;
}

VectorField gradient(const ScalarField& f) {
  return VectorField(partial(f, 0), partial(f, 1), partial(f, 2));
}

ScalarField dealias(const ScalarField& f) {
  ScalarField s = to_spectral(f);
  auto modes = s.modes();
  const Grid3& g = s.grid();
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    if (!inside_dealias_band(g, ix, iy, iz)) modes[idx] = 0.0;
  });
  return s;
}

ScalarField band_limited_samples(const ScalarField& f) { return inverse_transform(dealias(f)); }

ScalarField product_to_spectral(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "dealiased product");
  ScalarField prod(a.grid(), Representation::real);
  auto p = prod.values();
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = av[i] * bv[i];
  return dealias(transform(prod));
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "dealiased product");
  return product_to_spectral(band_limited_samples(a), band_limited_samples(b));
}

}  // namespace bmild
