#include "bmild/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bmild/error.hpp"
#include "bmild/norms.hpp"
#include "bmild/spectral.hpp"

namespace bmild {

namespace {

// Component (i, j, l) with the multiplicity it carries in the Frobenius sum.
struct ComponentIndex {
  int i = 0;
  int j = 0;
  int l = 0;
  int multiplicity = 1;
};

std::vector<ComponentIndex> unique_components(KernelKind kind) {
  std::vector<ComponentIndex> out;
  switch (kind) {
    case KernelKind::oseen:
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) out.push_back({i, j, 0, i == j ? 1 : 2});
      break;
    case KernelKind::projected_div:
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
          for (int l = 0; l < 3; ++l) out.push_back({i, j, l, i == j ? 1 : 2});
      break;
    case KernelKind::plain_div:
      for (int l = 0; l < 3; ++l) out.push_back({0, 0, l, 1});
      break;
    case KernelKind::heat:
      out.push_back({0, 0, 0, 1});
      break;
  }
  return out;
}

std::size_t component_count(KernelKind kind) {
  switch (kind) {
    case KernelKind::oseen: return 9;
    case KernelKind::projected_div: return 27;
    case KernelKind::plain_div: return 3;
    case KernelKind::heat: return 1;
  }
  return 1;
}

std::size_t storage_slot(KernelKind kind, int i, int j, int l) {
  switch (kind) {
    case KernelKind::oseen: return static_cast<std::size_t>(3 * i + j);
    case KernelKind::projected_div: return static_cast<std::size_t>(9 * i + 3 * j + l);
    case KernelKind::plain_div: return static_cast<std::size_t>(l);
    case KernelKind::heat: return 0;
  }
  return 0;
}

// Oseen multiplier entry; the mean mode gets the isotropic average (2/3) delta_ij.
double projector_entry(const Wavevector& w, bool mean_mode, int i, int j) {
  const double delta = i == j ? 1.0 : 0.0;
  if (mean_mode) return (2.0 / 3.0) * delta;
  if (w.kd2 == 0.0) return delta;
  return delta - w.kd[i] * w.kd[j] / w.kd2;
}

ScalarField component_samples(KernelKind kind, const Grid3& g, double t, const ComponentIndex& c) {
  ScalarField s(g, Representation::spectral);
  auto modes = s.modes();
  const double inv_volume = 1.0 / g.volume();
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    const Wavevector w = wavevector(g, ix, iy, iz);
    const bool mean_mode = ix == 0 && iy == 0 && iz == 0;
    const double heat = std::exp(-t * w.k2) * inv_volume;
    Complex m;
    switch (kind) {
      case KernelKind::oseen:
        m = heat * projector_entry(w, mean_mode, c.i, c.j);
        break;
      case KernelKind::projected_div:
        m = heat * projector_entry(w, mean_mode, c.i, c.j) * Complex(0.0, w.kd[c.l]);
        break;
      case KernelKind::plain_div:
        m = heat * Complex(0.0, w.kd[c.l]);
        break;
      case KernelKind::heat:
        m = heat;
        break;
    }
    modes[idx] = m;
  });
  return inverse_transform(s);
}

void accumulate_square(std::vector<double>& acc, const ScalarField& f, double weight) {
  const auto v = f.values();
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weight * v[i] * v[i];
}

ScalarField sqrt_field(const Grid3& g, const std::vector<double>& squares) {
  ScalarField out(g);
  auto v = out.values();
  for (std::size_t i = 0; i < squares.size(); ++i) v[i] = std::sqrt(squares[i]);
  return out;
}

KernelField build_kernel(KernelKind kind, const Grid3& grid, double t) {
  check_kernel_resolution(grid, t);
  KernelField kf{grid, t, kind, std::vector<ScalarField>(component_count(kind), ScalarField(grid)),
                 ScalarField(grid)};
  std::vector<double> squares(grid.real_size(), 0.0);
  for (const auto& c : unique_components(kind)) {
    ScalarField samples = component_samples(kind, grid, t, c);
    accumulate_square(squares, samples, c.multiplicity);
    kf.components[storage_slot(kind, c.i, c.j, c.l)] = samples;
    if (c.i != c.j) kf.components[storage_slot(kind, c.j, c.i, c.l)] = std::move(samples);
  }
  kf.magnitude = sqrt_field(grid, squares);
  return kf;
}

}  // namespace

const ScalarField& KernelField::oseen(int i, int j) const {
  if (kind != KernelKind::oseen) throw FieldMismatch("kernel is not the Oseen kernel");
  return components.at(storage_slot(kind, i, j, 0));
}
const ScalarField& KernelField::projected_div(int i, int j, int l) const {
  if (kind != KernelKind::projected_div) throw FieldMismatch("kernel is not e^{tL}P div");
  return components.at(storage_slot(kind, i, j, l));
}
const ScalarField& KernelField::plain_div(int l) const {
  if (kind != KernelKind::plain_div) throw FieldMismatch("kernel is not e^{tL} div");
  return components.at(storage_slot(kind, 0, 0, l));
}

double similarity_exponent(KernelKind kind) {
  switch (kind) {
    case KernelKind::oseen:
    case KernelKind::heat:
      return 1.5;
    case KernelKind::projected_div:
    case KernelKind::plain_div:
      return 2.0;
  }
  return 1.5;
}

void check_kernel_resolution(const Grid3& grid, double t) {
  if (!(t > 0.0)) throw KernelUnresolved("kernel unresolved: t must be positive");
  const double root = std::sqrt(t);
  if (root < kKernelResolution * grid.dx()) {
    std::ostringstream os;
    os << "kernel unresolved: sqrt(t) = " << root << " violates the resolution bound sqrt(t) >= "
       << kKernelResolution << "*dx = " << kKernelResolution * grid.dx();
    throw KernelUnresolved(os.str());
  }
  if (root > grid.box_length() / 20.0) {
    std::ostringstream os;
    os << "kernel unresolved: sqrt(t) = " << root
       << " violates the containment bound sqrt(t) <= L/20 = " << grid.box_length() / 20.0;
    throw KernelUnresolved(os.str());
  }
}

KernelField kernel_K(const Grid3& grid, double t) { return build_kernel(KernelKind::oseen, grid, t); }

KernelField kernel_F(const Grid3& grid, double t, bool projected) {
  return build_kernel(projected ? KernelKind::projected_div : KernelKind::plain_div, grid, t);
}

KernelField heat_kernel(const Grid3& grid, double t) {
  return build_kernel(KernelKind::heat, grid, t);
}

namespace {

// Circular convolution dx^3 sum_y k(x - y) f(y), evaluated through the transform.
ScalarField circular_convolution(const ScalarField& kernel, const ScalarField& f) {
  const Grid3& g = kernel.grid();
  ScalarField a = transform(kernel);
  const ScalarField b = to_spectral(f);
  auto am = a.modes();
  auto bm = b.modes();
  const double scale = g.volume();
  for (std::size_t i = 0; i < am.size(); ++i) am[i] *= scale * bm[i];
  return inverse_transform(a);
}

}  // namespace

VectorField convolve(const KernelField& k, const VectorField& v) {
  if (k.kind != KernelKind::oseen) throw FieldMismatch("convolve expects the Oseen kernel");
  require_same_grid(k.grid, v.grid(), "kernel convolution");
  VectorField out(k.grid);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i] += circular_convolution(k.oseen(i, j), v[j]);
  }
  return out;
}

VectorField convolve_matrix(const KernelField& k, const std::array<VectorField, 3>& rows) {
  if (k.kind != KernelKind::projected_div) {
    throw FieldMismatch("convolve_matrix expects the projected divergence kernel");
  }
  VectorField out(k.grid);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int l = 0; l < 3; ++l) {
        out[i] += circular_convolution(k.projected_div(i, j, l), rows[static_cast<std::size_t>(l)][j]);
      }
    }
  }
  return out;
}

ScalarField kernel_magnitude(KernelKind kind, const Grid3& grid, double t) {
  check_kernel_resolution(grid, t);
  std::vector<double> squares(grid.real_size(), 0.0);
  for (const auto& c : unique_components(kind)) {
    accumulate_square(squares, component_samples(kind, grid, t, c), c.multiplicity);
  }
  return sqrt_field(grid, squares);
}

double verify_self_similarity(KernelKind kind, const Grid3& grid, double t1, double t2) {
  check_kernel_resolution(grid, t1);
  check_kernel_resolution(grid, t2);
  if (t1 == t2) return 0.0;
  // k(x, t1) = s^{2a} k(s x, t2) with s = sqrt(t2 / t1).
  const double s = std::sqrt(t2 / t1);
  const bool expand = s > 1.0;
  const double ratio = expand ? s : 1.0 / s;
  const int step = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - step) > 1e-9 * ratio) {
    throw ConfigError("self-similarity check needs sqrt(t2/t1) or sqrt(t1/t2) to be an integer");
  }
  const double a = similarity_exponent(kind);
  const double factor = std::pow(s, 2.0 * a);
  const int n = grid.n();
  std::vector<double> diff2(grid.real_size(), 0.0);
  std::vector<double> mag2(grid.real_size(), 0.0);
  std::vector<char> mapped(grid.real_size(), 0);

  // Signed index i maps to i*step (expand) or i/step (contract) when it stays on the grid.
  auto map_index = [&](int i, int& out) {
    const int si = grid.signed_index(i);
    int target;
    if (expand) {
      target = si * step;
    } else {
      if (si % step != 0) return false;
      target = si / step;
    }
    if (target < -n / 2 || target >= n / 2) return false;
    out = target < 0 ? target + n : target;
    return true;
  };
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int m;
    if (map_index(i, m)) map[static_cast<std::size_t>(i)] = m;
  }

  for (const auto& c : unique_components(kind)) {
    const ScalarField k1 = component_samples(kind, grid, t1, c);
    const ScalarField k2 = component_samples(kind, grid, t2, c);
    const auto v1 = k1.values();
    const auto v2 = k2.values();
    for (int iz = 0; iz < n; ++iz) {
      const int mz = map[static_cast<std::size_t>(iz)];
      for (int iy = 0; iy < n; ++iy) {
        const int my = map[static_cast<std::size_t>(iy)];
        for (int ix = 0; ix < n; ++ix) {
          const std::size_t idx = grid.real_index(ix, iy, iz);
          mag2[idx] += c.multiplicity * v1[idx] * v1[idx];
          const int mx = map[static_cast<std::size_t>(ix)];
          if (mx < 0 || my < 0 || mz < 0) continue;
          mapped[idx] = 1;
          const double d = v1[idx] - factor * v2[grid.real_index(mx, my, mz)];
          diff2[idx] += c.multiplicity * d * d;
        }
      }
    }
  }
  const double peak2 = *std::max_element(mag2.begin(), mag2.end());
  const double floor2 = 1e-12 * peak2;  // (1e-6 of peak)^2
  double worst2 = 0.0;
  for (std::size_t i = 0; i < diff2.size(); ++i) {
    if (mapped[i] && mag2[i] >= floor2) worst2 = std::max(worst2, diff2[i]);
  }
  return std::sqrt(worst2 / peak2);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ConfigError("slope fit with degenerate abscissae");
  return sxy / sxx;
}

DecayFit verify_decay(KernelKind kind, const Grid3& grid, double r_min, int shells) {
  const double r_max = grid.box_length() / 4.0;
  if (!(r_max > r_min) || shells < 2) {
    throw KernelUnresolved("kernel unresolved: decay fit window [r_min, L/4] is empty");
  }
  const ScalarField mag = kernel_magnitude(kind, grid, 1.0);
  const auto v = mag.values();
  std::vector<double> best(static_cast<std::size_t>(shells), -1.0);
  std::vector<double> where(static_cast<std::size_t>(shells), 0.0);
  const double log_span = std::log(r_max / r_min);
  const int n = grid.n();
  for (int iz = 0; iz < n; ++iz) {
    const double z = grid.coordinate(iz);
    for (int iy = 0; iy < n; ++iy) {
      const double y = grid.coordinate(iy);
      for (int ix = 0; ix < n; ++ix) {
        const double x = grid.coordinate(ix);
        const double r = std::sqrt(x * x + y * y + z * z);
        if (r < r_min || r > r_max) continue;
        int shell = static_cast<int>(std::log(r / r_min) / log_span * shells);
        shell = std::clamp(shell, 0, shells - 1);
        const double m = v[grid.real_index(ix, iy, iz)];
        auto& b = best[static_cast<std::size_t>(shell)];
        if (m > b) {
          b = m;
          where[static_cast<std::size_t>(shell)] = r;
        }
      }
    }
  }
  DecayFit fit;
  std::vector<double> lx, ly;
  for (int s = 0; s < shells; ++s) {
    const double b = best[static_cast<std::size_t>(s)];
    if (b <= 0.0) continue;
    fit.radii.push_back(where[static_cast<std::size_t>(s)]);
    fit.maxima.push_back(b);
    lx.push_back(std::log(where[static_cast<std::size_t>(s)]));
    ly.push_back(std::log(b));
  }
  if (lx.size() < 2) throw KernelUnresolved("kernel unresolved: decay fit window has no samples");
  fit.slope = fit_slope(lx, ly);
  return fit;
}

PowerLawFit kernel_lbeta_law(KernelKind kind, const Grid3& grid, double beta,
                             const std::vector<double>& t_grid) {
  if (!(beta >= 1.0)) throw ConfigError("kernel L^beta law requires beta >= 1");
  if (t_grid.size() < 2) throw ConfigError("kernel L^beta law needs at least two times");
  PowerLawFit fit;
  std::vector<double> lx, ly;
  for (double t : t_grid) {
    const double norm = lp_norm(kernel_magnitude(kind, grid, t), beta);
    fit.times.push_back(t);
    fit.norms.push_back(norm);
    lx.push_back(std::log(t));
    ly.push_back(std::log(norm));
  }
  fit.slope = fit_slope(lx, ly);
  return fit;
}

PowerLawFit buoyancy_lp_law(const Grid3& grid, double gaussian_time, double s,
                            const std::vector<double>& t_grid) {
  if (!(gaussian_time > 0.0)) throw ConfigError("Gaussian time must be positive");
  if (!(s > 1.0)) throw ConfigError("L^1 -> L^s law requires s > 1");
  if (t_grid.size() < 2) throw ConfigError("L^s law needs at least two times");
  // Unit-mass G_a(x) = (4 pi a)^{-3/2} exp(-|x|^2 / (4a)) sampled on the grid.
  ScalarField theta0(grid);
  const double norm = std::pow(4.0 * std::numbers::pi * gaussian_time, -1.5);
  const int n = grid.n();
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double x = grid.coordinate(ix), y = grid.coordinate(iy), z = grid.coordinate(iz);
        theta0.at(ix, iy, iz) = norm * std::exp(-(x * x + y * y + z * z) / (4.0 * gaussian_time));
      }
  VectorField buoy(grid);
  buoy[2] = theta0;
  VectorField projected = leray_project(to_spectral(buoy));
  // Same mean-mode convention as kernel_K.
  projected[2].modes()[0] *= 2.0 / 3.0;
  PowerLawFit fit;
  std::vector<double> lx, ly;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw ConfigError("L^s law times must be positive");
    const double value = lp_norm(to_real(heat_semigroup(projected, t)), s);
    fit.times.push_back(t);
    fit.norms.push_back(value);
    lx.push_back(std::log(t + gaussian_time));
    ly.push_back(std::log(value));
  }
  fit.slope = fit_slope(lx, ly);
  return fit;
}

}  // namespace bmild
