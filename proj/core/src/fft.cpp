#include "snls/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "snls/error.hpp"

namespace snls {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

SpectralTransform::SpectralTransform(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidParameter("transform size must be positive");
  std::lock_guard lock(planner_mutex());
  buffer_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (buffer_ == nullptr) throw std::bad_alloc();
  const int size = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(size, as_fftw(buffer_), as_fftw(buffer_), FFTW_FORWARD,
                                   FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_1d(size, as_fftw(buffer_), as_fftw(buffer_), FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(buffer_);
}

void SpectralTransform::forward(std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != n_ || out.size() != n_) throw InvalidParameter("transform size mismatch");
  std::copy(in.begin(), in.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(buffer_, buffer_ + n_, out.begin());
}

void SpectralTransform::inverse(std::span<const Complex> in, std::span<Complex> out) {
  if (in.size() != n_ || out.size() != n_) throw InvalidParameter("transform size mismatch");
  std::copy(in.begin(), in.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = buffer_[j] * scale;
}

SpectralTransform& SpectralTransform::local(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<SpectralTransform>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<SpectralTransform>(n);
  return *slot;
}

}  // namespace snls
