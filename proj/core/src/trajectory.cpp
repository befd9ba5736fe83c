#include "snls/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snls/error.hpp"
#include "snls/norms.hpp"

namespace snls {

std::size_t SolverConfig::steps() const {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw InvalidParameter("need dt > 0 and horizon > 0");
  if (dt > horizon) throw InvalidParameter("dt exceeds the horizon");
  if (record_stride == 0) throw InvalidParameter("record stride must be >= 1");
  const double ratio = horizon / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw InvalidParameter("horizon must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(rounded);
}

Trajectory::Trajectory(SolverConfig config, double start_time)
    : config_(std::move(config)), start_time_(start_time) {
  if (!(config_.dt > 0.0)) throw InvalidParameter("trajectory needs dt > 0");
}

void Trajectory::record_state(const Field& u, bool keep_snapshot) {
  const double p = l10_fifth_power(u);
  if (accumulated_.empty()) {
    accumulated_.push_back(0.0);
  } else {
    double acc = accumulated_.back();
    acc += l10_fifth_.back() * config_.dt;
    accumulated_.push_back(acc);
  }
  l10_fifth_.push_back(p);
  l2_.push_back(std::sqrt(mass(u)));
  if (keep_snapshot) {
    snapshots_.push_back(u);
    snapshot_steps_.push_back(l10_fifth_.size() - 1);
  }
}

void Trajectory::record_step(double factor, std::vector<double> gaussians) {
  factors_.push_back(factor);
  gaussians_.push_back(std::move(gaussians));
}

std::size_t Trajectory::step_count() const noexcept {
  return l10_fifth_.empty() ? 0 : l10_fifth_.size() - 1;
}

double Trajectory::step_time(std::size_t n) const noexcept {
  return start_time_ + static_cast<double>(n) * config_.dt;
}

double Trajectory::end_time() const noexcept { return step_time(step_count()); }

bool Trajectory::has_every_state() const noexcept {
  return !l10_fifth_.empty() && snapshots_.size() == l10_fifth_.size();
}

std::optional<std::size_t> Trajectory::step_index(double t) const noexcept {
  if (l10_fifth_.empty()) return std::nullopt;
  const double x = (t - start_time_) / config_.dt;
  const double n = std::round(x);
  if (std::abs(x - n) > 1e-9 || n < 0.0 || n > static_cast<double>(step_count())) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(n);
}

const Field& Trajectory::state_at(double t) const {
  const auto n = step_index(t);
  if (n) {
    const auto it = std::lower_bound(snapshot_steps_.begin(), snapshot_steps_.end(), *n);
    if (it != snapshot_steps_.end() && *it == *n) {
      return snapshots_[static_cast<std::size_t>(it - snapshot_steps_.begin())];
    }
  }
  throw RangeError("no snapshot recorded at t = " + show(t));
}

const Field& Trajectory::initial() const {
  if (snapshots_.empty() || snapshot_steps_.front() != 0) throw RangeError("no initial snapshot");
  return snapshots_.front();
}

const Field& Trajectory::final() const {
  if (snapshots_.empty() || snapshot_steps_.back() != step_count()) {
    throw RangeError("no final snapshot");
  }
  return snapshots_.back();
}

namespace {

void check_interval(const Trajectory& traj, double t0, double t1) {
  const double tol = 1e-9 * traj.dt();
  if (traj.l10_fifth().empty()) throw RangeError("empty trajectory");
  if (t0 > t1 || t0 < traj.start_time() - tol || t1 > traj.end_time() + tol) {
    throw RangeError("interval [" + show(t0) + ", " + show(t1) +
                     "] is outside the trajectory span");
  }
}

}  // namespace

double x2_norm(const Trajectory& traj, double t0, double t1) {
  check_interval(traj, t0, t1);
  const auto& p = traj.l10_fifth();
  double integral = 0.0;
  for (std::size_t n = 0; n < traj.step_count(); ++n) {
    const double a = std::max(t0, traj.step_time(n));
    const double b = std::min(t1, traj.step_time(n + 1));
    if (b > a) integral += p[n] * (b - a);
  }
  return std::pow(integral, 0.2);
}

double x_norm(const Trajectory& traj, double t0, double t1) {
  check_interval(traj, t0, t1);
  const double tol = 1e-9 * traj.dt();
  const auto& l2 = traj.l2_norms();
  double sup = 0.0;
  for (std::size_t n = 0; n < l2.size(); ++n) {
    const double t = traj.step_time(n);
    const bool inside = t >= t0 - tol && t <= t1 + tol;
    // The state at the start of the step containing t0 also governs [t0, ...).
    const bool covers_start = t < t0 && traj.step_time(n + 1) > t0 + tol;
    if (inside || covers_start) sup = std::max(sup, l2[n]);
  }
  return sup + x2_norm(traj, t0, t1);
}

double x2_norm(const Trajectory& traj) {
  return x2_norm(traj, traj.start_time(), traj.end_time());
}

double x_norm(const Trajectory& traj) { return x_norm(traj, traj.start_time(), traj.end_time()); }

}  // namespace snls
