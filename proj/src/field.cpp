#include "bmild/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "bmild/error.hpp"

namespace bmild {

namespace {

class FftPlans {
 public:
  explicit FftPlans(int n) {
    std::vector<double> real(static_cast<std::size_t>(n) * n * n);
    std::vector<Complex> modes(static_cast<std::size_t>(n) * n * (n / 2 + 1));
    auto* spec = reinterpret_cast<fftw_complex*>(modes.data());
    // Dimensions are given slowest first, so x is the contiguous (halved) axis.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_3d(n, n, n, real.data(), spec, flags);
    backward_ = fftw_plan_dft_c2r_3d(n, n, n, spec, real.data(), flags);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(double* in, Complex* out) const {
    fftw_execute_dft_r2c(forward_, in, reinterpret_cast<fftw_complex*>(out));
  }
  // Destroys the input array.
  void backward(Complex* in, double* out) const {
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  fftw_plan forward_;
  fftw_plan backward_;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

int& requested_threads() {
  static int threads = 0;
  return threads;
}

void configure_threads_locked() {
  static bool configured = false;
  if (configured) return;
  configured = true;
  int threads = requested_threads();
  if (threads <= 0) {
    threads = 1;
    if (const char* env = std::getenv("BMILD_THREADS")) {
      threads = std::max(1, std::atoi(env));
    }
  }
  if (threads > 1) {
    fftw_init_threads();
    fftw_plan_with_nthreads(threads);
  }
}

const FftPlans& plans_for(int n) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  configure_threads_locked();
  static std::map<int, std::unique_ptr<FftPlans>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<FftPlans>(n)).first;
  }
  return *it->second;
}

}  // namespace

void set_fft_threads(int threads) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  requested_threads() = threads;
}

ScalarField::ScalarField(const Grid3& grid, Representation rep) : grid_(grid), rep_(rep) {
  if (rep_ == Representation::real) {
    values_.assign(grid_.real_size(), 0.0);
  } else {
    modes_.assign(grid_.spectral_size(), Complex{});
  }
}

std::span<double> ScalarField::values() {
  if (rep_ != Representation::real) throw FieldMismatch("field is in spectral representation");
  return values_;
}
std::span<const double> ScalarField::values() const {
  if (rep_ != Representation::real) throw FieldMismatch("field is in spectral representation");
  return values_;
}
std::span<Complex> ScalarField::modes() {
  if (rep_ != Representation::spectral) throw FieldMismatch("field is in real representation");
  return modes_;
}
std::span<const Complex> ScalarField::modes() const {
  if (rep_ != Representation::spectral) throw FieldMismatch("field is in real representation");
  return modes_;
}

void ScalarField::require_compatible(const ScalarField& other, const char* what) const {
  require_same_grid(grid_, other.grid_, what);
  if (rep_ != other.rep_) throw FieldMismatch(std::string(what) + ": representation mismatch");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) { return add_scaled(1.0, other); }
ScalarField& ScalarField::operator-=(const ScalarField& other) { return add_scaled(-1.0, other); }

ScalarField& ScalarField::operator*=(double factor) {
  for (auto& v : values_) v *= factor;
  for (auto& c : modes_) c *= factor;
  return *this;
}

ScalarField& ScalarField::add_scaled(double factor, const ScalarField& other) {
  require_compatible(other, "field arithmetic");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += factor * other.values_[i];
  for (std::size_t i = 0; i < modes_.size(); ++i) modes_[i] += factor * other.modes_[i];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double factor, ScalarField a) { return a *= factor; }

ScalarField transform(const ScalarField& field) {
  const Grid3& g = field.grid();
  std::vector<double> scratch(field.values().begin(), field.values().end());
  ScalarField out(g, Representation::spectral);
  auto modes = out.modes();
  plans_for(g.n()).forward(scratch.data(), modes.data());
  const double scale = 1.0 / static_cast<double>(g.real_size());
  for (auto& c : modes) c *= scale;
  return out;
}

ScalarField inverse_transform(const ScalarField& field) {
  const Grid3& g = field.grid();
  std::vector<Complex> scratch(field.modes().begin(), field.modes().end());
  ScalarField out(g, Representation::real);
  plans_for(g.n()).backward(scratch.data(), out.values().data());
  return out;
}

ScalarField to_spectral(const ScalarField& field) {
  return field.is_spectral() ? field : transform(field);
}
ScalarField to_real(const ScalarField& field) {
  return field.is_real() ? field : inverse_transform(field);
}

VectorField::VectorField(const Grid3& grid, Representation rep)
    : components_{ScalarField(grid, rep), ScalarField(grid, rep), ScalarField(grid, rep)} {}

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z)
    : components_{std::move(x), std::move(y), std::move(z)} {
  for (int a = 1; a < 3; ++a) {
    require_same_grid(components_[0].grid(), components_[a].grid(), "vector field");
    if (components_[a].representation() != components_[0].representation()) {
      throw FieldMismatch("vector field: components in different representations");
    }
  }
}

VectorField& VectorField::operator+=(const VectorField& other) { return add_scaled(1.0, other); }
VectorField& VectorField::operator-=(const VectorField& other) { return add_scaled(-1.0, other); }
VectorField& VectorField::operator*=(double factor) {
  for (auto& c : components_) c *= factor;
  return *this;
}
VectorField& VectorField::add_scaled(double factor, const VectorField& other) {
  for (int a = 0; a < 3; ++a) (*this)[a].add_scaled(factor, other[a]);
  divergence_free = divergence_free && other.divergence_free;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double factor, VectorField a) { return a *= factor; }

namespace {
template <class Fn>
VectorField map_components(const VectorField& v, Fn fn) {
  VectorField out(fn(v[0]), fn(v[1]), fn(v[2]));
  out.divergence_free = v.divergence_free;
  return out;
}
}  // namespace

VectorField transform(const VectorField& field) {
  return map_components(field, [](const ScalarField& f) { return transform(f); });
}
VectorField inverse_transform(const VectorField& field) {
  return map_components(field, [](const ScalarField& f) { return inverse_transform(f); });
}
VectorField to_spectral(const VectorField& field) {
  return map_components(field, [](const ScalarField& f) { return to_spectral(f); });
}
VectorField to_real(const VectorField& field) {
  return map_components(field, [](const ScalarField& f) { return to_real(f); });
}

}  // namespace bmild
