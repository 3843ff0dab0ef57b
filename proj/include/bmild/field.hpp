#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "bmild/grid.hpp"

namespace bmild {

using Complex = std::complex<double>;

enum class Representation { real, spectral };

/// Scalar samples on a Grid3, held either as n^3 real values or as the
/// half-spectrum Fourier coefficients. Coefficients are normalized so that a
/// constant field c has coefficient c at k = 0.
class ScalarField {
 public:
  explicit ScalarField(const Grid3& grid, Representation rep = Representation::real);

  const Grid3& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  bool is_real() const { return rep_ == Representation::real; }
  bool is_spectral() const { return rep_ == Representation::spectral; }

  std::span<double> values();
  std::span<const double> values() const;
  std::span<Complex> modes();
  std::span<const Complex> modes() const;

  double& at(int ix, int iy, int iz) { return values()[grid_.real_index(ix, iy, iz)]; }
  double at(int ix, int iy, int iz) const {
    return values()[grid_.real_index(ix, iy, iz)];
  }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double factor);
  /// this += factor * other
  ScalarField& add_scaled(double factor, const ScalarField& other);

 private:
  void require_compatible(const ScalarField& other, const char* what) const;

  Grid3 grid_;
  Representation rep_;
  std::vector<double> values_;
  std::vector<Complex> modes_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double factor, ScalarField a);

/// Forward transform; the input must be in real representation.
ScalarField transform(const ScalarField& field);
/// Inverse transform; the input must be in spectral representation.
ScalarField inverse_transform(const ScalarField& field);
/// Converting copies that pass through fields already in the target representation.
ScalarField to_spectral(const ScalarField& field);
ScalarField to_real(const ScalarField& field);

/// Three scalar components on a shared grid.
class VectorField {
 public:
  explicit VectorField(const Grid3& grid, Representation rep = Representation::real);
  VectorField(ScalarField x, ScalarField y, ScalarField z);

  const Grid3& grid() const { return components_[0].grid(); }
  Representation representation() const { return components_[0].representation(); }

  ScalarField& operator[](int axis) { return components_[static_cast<std::size_t>(axis)]; }
  const ScalarField& operator[](int axis) const {
    return components_[static_cast<std::size_t>(axis)];
  }

  /// Advisory: set by the Leray projector and by operators whose image is solenoidal.
  bool divergence_free = false;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double factor);
  VectorField& add_scaled(double factor, const VectorField& other);

 private:
  std::array<ScalarField, 3> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double factor, VectorField a);

VectorField transform(const VectorField& field);
VectorField inverse_transform(const VectorField& field);
VectorField to_spectral(const VectorField& field);
VectorField to_real(const VectorField& field);

/// Caps the number of FFT threads; reads BMILD_THREADS on first use otherwise.
void set_fft_threads(int threads);

}  // namespace bmild
