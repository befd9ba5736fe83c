#pragma once

#include <cstdint>
#include <vector>

#include "snls/field.hpp"

namespace snls {

/// Finite-rank model of the trace-class operator Phi in W = Phi W~:
/// Phi f = sum_k c_k g_k <e_k, f>, with {e_k} orthonormal input functions and
/// {g_k} orthonormal real output modes, so that Phi e_k = c_k g_k.
///
/// Immutable after construction; share freely between threads.
class NoiseModel {
 public:
  /// Rank-zero model: no noise.
  explicit NoiseModel(GridPtr grid);
  NoiseModel(GridPtr grid, std::vector<RealField> input_basis, std::vector<RealField> modes,
             std::vector<double> singular_values, int weight_exponent = 2, int smoothness = 2);

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t rank() const noexcept { return singular_values_.size(); }
  const std::vector<RealField>& input_basis() const noexcept { return input_basis_; }
  const std::vector<RealField>& modes() const noexcept { return modes_; }
  const std::vector<double>& singular_values() const noexcept { return singular_values_; }
  int weight_exponent() const noexcept { return weight_exponent_; }
  int smoothness() const noexcept { return smoothness_; }

  /// sum_k c_k.
  double trace() const noexcept;

  /// Phi applied to an arbitrary real input through discrete inner products
  /// with the input basis.
  RealField apply(const RealField& input) const;

  /// Cached F_Phi = sum_k (c_k g_k)^2.
  const RealField& correction() const noexcept { return correction_; }

 private:
  GridPtr grid_;
  std::vector<RealField> input_basis_;
  std::vector<RealField> modes_;
  std::vector<double> singular_values_;
  int weight_exponent_ = 2;
  int smoothness_ = 2;
  RealField correction_;
};

struct NoiseModelParams {
  std::size_t rank = 8;
  double decay = 2.0;  ///< s in c_k = amplitude (1 + k)^{-s}; must exceed 1
  double width = 1.0;  ///< sigma, spatial scale of the output modes
  double amplitude = 1.0;
  int weight_exponent = 2;  ///< K of the target space H
  int smoothness = 2;       ///< N of the target space H
};

/// Builds Phi from Hermite functions: e_k = h_{k-1}(x), g_k proportional to
/// e^{-x^2 / (2 sigma^2)} h_{k-1}(x / sigma), both re-orthonormalized on the
/// grid. Throws ResolutionError when the modes oscillate faster than the grid
/// resolves or do not decay inside the box.
NoiseModel build_noise_model(const GridPtr& grid, const NoiseModelParams& params);

/// F_Phi(x) = sum_k (Phi e_k)^2(x) computed from the given basis images.
RealField ito_stratonovich_correction(const NoiseModel& model);

/// sum_{j <= N} || (1 + |x|^K) f^{(j)} ||_{L^2}, derivatives taken spectrally.
double weighted_sobolev_norm(const RealField& f, int weight_exponent, int smoothness);

/// One Brownian increment dW = sqrt(dt) sum_k c_k xi_k g_k.
struct NoiseIncrement {
  RealField delta_w;
  double dt;
  std::vector<double> gaussians;  ///< the xi_k used
};

/// Rebuilds an increment from stored standard normals.
NoiseIncrement reconstruct_increment(const NoiseModel& model, double dt,
                                     std::vector<double> gaussians);

/// Position of a path in the counter-based random stream.
struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  std::uint64_t step = 0;
};

/// Draws xi_k from substream (seed, path, step) and advances `stream.step`.
NoiseIncrement sample_increment(const NoiseModel& model, double dt, NoiseStream& stream);

}  // namespace snls
