#include "snls/grid.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "snls/error.hpp"

namespace snls {

SpectralGrid::SpectralGrid(double half_length, std::size_t points)
    : half_length_(half_length), points_(points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw InvalidParameter("grid half-length must be positive and finite");
  }
  if (points < 8 || !std::has_single_bit(points)) {
    throw InvalidParameter("grid point count must be a power of two >= 8, got " +
                           show(points));
  }
  dx_ = 2.0 * half_length_ / static_cast<double>(points_);
  positions_.resize(points_);
  wavenumbers_.resize(points_);
  const double dk = wavenumber_spacing();
  const auto n = static_cast<std::ptrdiff_t>(points_);
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    positions_[j] = -half_length_ + static_cast<double>(j) * dx_;
    const std::ptrdiff_t mode = j < n / 2 ? j : j - n;
    wavenumbers_[j] = dk * static_cast<double>(mode);
  }
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make(double half_length, std::size_t points) {
  return std::make_shared<const SpectralGrid>(half_length, points);
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make_default() {
  return make(kDefaultHalfLength, kDefaultPoints);
}

}  // namespace snls
