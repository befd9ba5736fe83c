#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "snls/field.hpp"
#include "snls/solver_config.hpp"

namespace snls {

/// Time series produced by a solve: per-step norms for every step, full
/// fields at the configured stride, the truncation factor and gaussians each
/// step consumed, and the stopping time.
///
/// Step n covers [t_n, t_{n+1}) with t_n = start + n dt. Space-time norms use
/// the left-endpoint value on each step.
class Trajectory {
 public:
  Trajectory(SolverConfig config, double start_time);

  /// Appends the state at the next step time t_n.
  void record_state(const Field& u, bool keep_snapshot);
  /// Appends what step n -> n+1 consumed.
  void record_step(double factor, std::vector<double> gaussians = {});

  const SolverConfig& config() const noexcept { return config_; }
  double dt() const noexcept { return config_.dt; }
  double start_time() const noexcept { return start_time_; }
  double end_time() const noexcept;
  std::size_t step_count() const noexcept;  ///< completed steps K

  double step_time(std::size_t n) const noexcept;
  const std::vector<double>& l10_fifth() const noexcept { return l10_fifth_; }
  const std::vector<double>& l2_norms() const noexcept { return l2_; }
  /// Running integral of ||u||^5_{L^10} at each step time.
  const std::vector<double>& accumulated() const noexcept { return accumulated_; }
  const std::vector<double>& factors() const noexcept { return factors_; }
  const std::vector<std::vector<double>>& gaussians() const noexcept { return gaussians_; }

  const std::vector<Field>& snapshots() const noexcept { return snapshots_; }
  const std::vector<std::size_t>& snapshot_steps() const noexcept { return snapshot_steps_; }
  bool has_every_state() const noexcept;

  /// Snapshot recorded at time t (within 1e-9 dt). Throws RangeError.
  const Field& state_at(double t) const;
  const Field& initial() const;
  const Field& final() const;

  std::optional<double> stopping_time;
  std::optional<std::uint64_t> noise_path;

  /// Step index for time t (within 1e-9 dt), if t is a step time in range.
  std::optional<std::size_t> step_index(double t) const noexcept;

 private:
  SolverConfig config_;
  double start_time_;
  std::vector<double> l10_fifth_;
  std::vector<double> l2_;
  std::vector<double> accumulated_;
  std::vector<double> factors_;
  std::vector<std::vector<double>> gaussians_;
  std::vector<Field> snapshots_;
  std::vector<std::size_t> snapshot_steps_;
};

/// (int_{t0}^{t1} ||u(s)||^5_{L^10} ds)^{1/5} with u piecewise constant
/// (left endpoint) on each step. Throws RangeError outside the span.
double x2_norm(const Trajectory& traj, double t0, double t1);

/// sup_{t in [t0, t1]} ||u(t)||_{L^2} over step times, plus x2_norm.
double x_norm(const Trajectory& traj, double t0, double t1);

/// Whole-span shorthands.
double x2_norm(const Trajectory& traj);
double x_norm(const Trajectory& traj);

}  // namespace snls
