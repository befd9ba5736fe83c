#pragma once

#include <cstddef>
#include <span>

#include "snls/field.hpp"

namespace snls {

/// Owns an aligned FFTW buffer and a forward/backward plan pair for one size.
///
/// Instances are not thread-safe; use `SpectralTransform::local(n)` to obtain
/// the calling thread's instance. Plans are always built on the owned aligned
/// buffer so results are bitwise independent of which thread computed them.
class SpectralTransform {
 public:
  explicit SpectralTransform(std::size_t n);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// Unnormalized forward DFT: out_k = sum_j in_j e^{-2 pi i jk/N}. `in` and
  /// `out` may alias.
  void forward(std::span<const Complex> in, std::span<Complex> out);
  /// Inverse DFT including the 1/N factor. `in` and `out` may alias.
  void inverse(std::span<const Complex> in, std::span<Complex> out);

  static SpectralTransform& local(std::size_t n);

 private:
  std::size_t n_;
  Complex* buffer_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace snls
