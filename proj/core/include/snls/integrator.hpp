#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "snls/field.hpp"
#include "snls/noise.hpp"
#include "snls/norms.hpp"
#include "snls/solver_config.hpp"
#include "snls/trajectory.hpp"

namespace snls {

/// Incremental split-step integrator for
///   i u_t + Delta u = theta_m(A + ||u||^5_{X_2(0,t)}) mu N^eps(u) + u o dW + e.
///
/// Every substep is exact: the free group as a spectral multiplier, the
/// nonlinearity and the Stratonovich noise as pointwise phase rotations, and
/// the optional forcing as u <- u - i e dt. The truncation factor is frozen
/// at its start-of-step value. Several steppers can be advanced in lockstep
/// with a shared increment to obtain common-random-number comparisons.
class Stepper {
 public:
  Stepper(Field initial, SolverConfig config);

  const Field& state() const noexcept { return state_; }
  const SolverConfig& config() const noexcept { return config_; }
  const StrichartzAccumulator& accumulator() const noexcept { return acc_; }
  /// ||state||^5_{L^10}.
  double l10_fifth() const noexcept { return l10_fifth_; }
  /// Truncation factor used by the most recent step (1 before any step).
  double last_factor() const noexcept { return last_factor_; }
  std::size_t steps_taken() const noexcept { return steps_taken_; }
  std::size_t total_steps() const noexcept { return total_steps_; }
  bool done() const noexcept { return steps_taken_ >= total_steps_; }

  /// One step of size dt. `increment` must be given iff the configuration is
  /// stochastic. `forcing`, when given, is e(t_n) on the grid.
  /// Throws BlowUp on non-finite values or (unforced) mass drift.
  void advance(const NoiseIncrement* increment = nullptr, const Field* forcing = nullptr);

 private:
  Field state_;
  SolverConfig config_;
  std::size_t total_steps_;
  std::vector<Complex> half_multiplier_;
  std::vector<Complex> full_multiplier_;
  StrichartzAccumulator acc_;
  double l10_fifth_;
  double initial_mass_;
  double last_factor_ = 1.0;
  std::size_t steps_taken_ = 0;
  bool forced_ = false;
};

/// One deterministic step from f; updates `acc` (left-endpoint contribution
/// and running sup of the mass).
Field step_deterministic(const Field& f, const SolverConfig& cfg, StrichartzAccumulator& acc);

/// As step_deterministic with the Stratonovich phase e^{-i dW} composed into
/// the pointwise substep.
Field step_stochastic(const Field& f, const SolverConfig& cfg, StrichartzAccumulator& acc,
                      const NoiseIncrement& increment);

/// Integrates to the horizon. Increments come from `stream` (path id recorded
/// in the trajectory) when the configuration is stochastic.
Trajectory solve(const Field& u0, const SolverConfig& cfg, NoiseStream stream = {});

/// ||u(t) - RHS(t)||_{L^2} for the Ito Duhamel formula
///   e^{itD}u0 - i sum e^{i(t-s)D}(theta mu N(u)) dt - i sum e^{i(t-s)D}(u dW)
///   - 1/2 sum e^{i(t-s)D}(F_Phi u) dt
/// with left-endpoint quadrature and the increments the stepper consumed.
/// Needs every state (record_stride 1); throws RangeError otherwise or when t
/// is not a recorded time.
double duhamel_residual(const Trajectory& traj, double t);

/// Forcing term e(t, .) for the perturbed equation.
using Forcing = std::function<Field(double t)>;

struct StabilityReport {
  double initial_gap = 0.0;   ///< ||v(a) - w(a)||_{L^2}
  double forcing_norm = 0.0;  ///< ||e||_{L^1_t L^2_x}
  double offset_gap = 0.0;    ///< |A - A~|
  double response = 0.0;      ///< ||v - w||_{X(I)}
  double response_x1 = 0.0;
  double response_x2 = 0.0;
  double ratio = 0.0;  ///< response / (sum of input sizes); 0 when both vanish

  double input_size() const noexcept { return initial_gap + forcing_norm + offset_gap; }
};

/// Solves w from w0 under cfg_w and v from v0 under cfg_v with forcing e
/// (may be empty), in lockstep with shared increments when stochastic, and
/// measures the response. Both configurations need equal dt and horizon.
StabilityReport stability_experiment(const Field& w0, const Field& v0, const Forcing& forcing,
                                     const SolverConfig& cfg_w, const SolverConfig& cfg_v,
                                     NoiseStream stream = {});

}  // namespace snls
