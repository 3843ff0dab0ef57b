#pragma once

#include <array>
#include <cstddef>

namespace bmild {

/// Periodic cubic box [-L/2, L/2)^3 sampled with n points per axis.
///
/// Real-space samples are stored x-fastest: index = ix + n*(iy + n*iz), and
/// sample (ix, iy, iz) sits at position (s(ix), s(iy), s(iz))*dx with the signed
/// index s(i) = i for i < n/2 and i - n otherwise, so the origin is sample 0.
///
/// Spectral coefficients use the real-to-complex half layout along x:
/// index = ix + (n/2+1)*(iy + n*iz) with ix in [0, n/2]. The integer mode of an
/// index is its signed index; the Nyquist index n/2 maps to -n/2.
class Grid3 {
 public:
  Grid3(int n, double box_length);

  int n() const { return n_; }
  double box_length() const { return length_; }
  double dx() const { return length_ / n_; }
  double cell_volume() const;
  double volume() const { return length_ * length_ * length_; }

  std::size_t real_size() const;
  int half_n() const { return n_ / 2 + 1; }
  std::size_t spectral_size() const;

  /// Signed integer index in {-n/2, ..., n/2-1}.
  int signed_index(int i) const { return i < n_ / 2 ? i : i - n_; }
  /// Fundamental wavenumber 2*pi/L.
  double k0() const;
  /// Physical wavenumber of an index along any axis.
  double wavenumber(int i) const { return k0() * signed_index(i); }
  /// Wavenumber used by odd (derivative-type) multipliers; zero at Nyquist.
  double derivative_wavenumber(int i) const {
    return i == n_ / 2 ? 0.0 : wavenumber(i);
  }
  double coordinate(int i) const { return signed_index(i) * dx(); }

  std::size_t real_index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(n_) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(n_) * iz);
  }
  std::size_t spectral_index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(half_n()) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(n_) * iz);
  }

  /// Largest retained |mode| under the 2/3 rule; 3*K < n always holds.
  int dealias_cutoff() const { return (n_ - 1) / 3; }

  bool operator==(const Grid3& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  int n_;
  double length_;
};

/// Validated grid construction; n must be even and at least 8, L positive.
Grid3 make_grid(int n, double box_length);

/// Throws FieldMismatch when the grids differ.
void require_same_grid(const Grid3& a, const Grid3& b, const char* what);

}  // namespace bmild
