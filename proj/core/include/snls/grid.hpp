#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace snls {

/// Periodic box [-L, L) with N equispaced points standing in for the real line.
///
/// Wavenumbers are stored in FFT order: 0, 1, ..., N/2-1, -N/2, ..., -1 (times
/// pi/L), so `wavenumbers()[j]` multiplies the j-th output of a forward
/// transform. The single unpaired mode is the Nyquist mode -N/2.
class SpectralGrid {
 public:
  static constexpr double kDefaultHalfLength = 40.0 * std::numbers::pi;
  static constexpr std::size_t kDefaultPoints = 4096;

  SpectralGrid(double half_length, std::size_t points);

  static std::shared_ptr<const SpectralGrid> make(double half_length, std::size_t points);
  static std::shared_ptr<const SpectralGrid> make_default();

  double half_length() const noexcept { return half_length_; }
  std::size_t size() const noexcept { return points_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t j) const noexcept { return positions_[j]; }
  std::span<const double> positions() const noexcept { return positions_; }
  std::span<const double> wavenumbers() const noexcept { return wavenumbers_; }
  double nyquist() const noexcept { return std::numbers::pi / dx_; }
  double wavenumber_spacing() const noexcept { return std::numbers::pi / half_length_; }

  /// Weight w with  sum_j |f_j|^2 dx == w * sum_k |fhat_k|^2  for the
  /// unnormalized forward transform.
  double spectral_weight() const noexcept { return dx_ / static_cast<double>(points_); }

  bool operator==(const SpectralGrid& other) const noexcept {
    return half_length_ == other.half_length_ && points_ == other.points_;
  }

 private:
  double half_length_;
  std::size_t points_;
  double dx_;
  std::vector<double> positions_;
  std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

}  // namespace snls
