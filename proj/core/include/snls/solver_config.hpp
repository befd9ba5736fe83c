#pragma once

#include <cstddef>
#include <memory>

#include "snls/noise.hpp"
#include "snls/nonlinearity.hpp"

namespace snls {

enum class Scheme {
  kStrang,  ///< half linear / (nonlinear o noise) / half linear
  kLie,     ///< full linear, then nonlinear o noise
};

/// One member of the approximation family: exponent (eps, mu), cutoff (m, A),
/// step, horizon, optional noise.
struct SolverConfig {
  NonlinearityExponent exponent{0.0, 1.0};
  CutoffSpec cutoff = CutoffSpec::none();
  double dt = 1e-3;
  double horizon = 1.0;
  std::shared_ptr<const NoiseModel> noise;  ///< null: deterministic equation
  Scheme scheme = Scheme::kStrang;
  std::size_t record_stride = 1;
  /// Largest tolerated mass fraction in the outer eighth of the box at
  /// recorded snapshots; <= 0 disables the monitor.
  double boundary_tolerance = 1e-10;
  /// Relative mass drift that aborts an unforced run as a blow-up.
  double drift_tolerance = 1e-6;

  bool stochastic() const noexcept { return noise && noise->rank() > 0; }

  /// Number of steps, horizon / dt. Throws InvalidParameter unless the horizon
  /// is an integer multiple of dt and record_stride >= 1.
  std::size_t steps() const;
};

}  // namespace snls
