#include "bmild/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bmild/error.hpp"

namespace bmild {

Grid3::Grid3(int n, double box_length) : n_(n), length_(box_length) {
  if (n < 8 || n % 2 != 0) {
    throw ConfigError("resolution must be even and >= 8 (got n = " +
                      std::to_string(n) + ")");
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw ConfigError("box length must be positive (got L = " +
                      std::to_string(box_length) + ")");
  }
}

double Grid3::cell_volume() const {
  const double h = dx();
  return h * h * h;
}

std::size_t Grid3::real_size() const {
  const auto m = static_cast<std::size_t>(n_);
  return m * m * m;
}

std::size_t Grid3::spectral_size() const {
  const auto m = static_cast<std::size_t>(n_);
  return m * m * static_cast<std::size_t>(half_n());
}

double Grid3::k0() const { return 2.0 * std::numbers::pi / length_; }

Grid3 make_grid(int n, double box_length) { return Grid3(n, box_length); }

void require_same_grid(const Grid3& a, const Grid3& b, const char* what) {
  if (!(a == b)) {
    throw FieldMismatch(std::string(what) + ": fields live on different grids");
  }
}

}  // namespace bmild
