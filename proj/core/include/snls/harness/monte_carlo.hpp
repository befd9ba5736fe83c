#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "snls/integrator.hpp"

namespace snls::harness {

/// Finite-sample surrogate for ||X||_{L^rho_omega}.
struct LomegaEstimate {
  double value = 0.0;           ///< (mean X^rho)^{1/rho}
  double standard_error = 0.0;  ///< bootstrap standard deviation of `value`
  std::size_t paths = 0;
};

/// (mean x^rho)^{1/rho}. Requires rho >= 1 and a nonempty sample.
double power_mean(std::span<const double> samples, double rho);

/// Resample index sets for a bootstrap over `paths` draws. The same sets can
/// be applied to several statistics to keep them paired.
std::vector<std::vector<std::size_t>> bootstrap_indices(std::size_t paths, std::size_t resamples,
                                                        std::uint64_t seed);

/// Standard deviation of statistic(resample) over the given index sets.
template <typename Statistic>
double bootstrap_error(const std::vector<std::vector<std::size_t>>& sets, Statistic&& statistic) {
  if (sets.size() < 2) return 0.0;
  std::vector<double> values;
  values.reserve(sets.size());
  for (const auto& s : sets) values.push_back(statistic(s));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(values.size() - 1));
}

/// Power mean with a bootstrap standard error (zero for fewer than two paths).
LomegaEstimate summarize_lomega(std::span<const double> samples, double rho, std::uint64_t seed,
                                std::size_t resamples = 200);

/// Space-time norms of a single run.
struct PathNorms {
  double x1 = 0.0;  ///< sup_t ||u(t)||_{L^2}
  double x2 = 0.0;  ///< ||u||_{L^5_t L^10_x}
  std::optional<double> stopping_time;
  /// Largest relative mass drift seen at monitored steps.
  double mass_drift = 0.0;

  double x() const noexcept { return x1 + x2; }
};

/// Integrates one path without storing the trajectory. The boundary monitor
/// of the configuration is applied every `monitor_every` steps and at the end.
/// Failures are rethrown as ExperimentFailure naming the path.
PathNorms run_path(const Field& u0, const SolverConfig& cfg, NoiseStream stream,
                   std::size_t monitor_every = 10);

struct LomegaReport {
  LomegaEstimate x;
  LomegaEstimate x2;
  std::vector<PathNorms> per_path;
};

/// Runs `paths` paths (substreams (seed, p)) and summarizes the X and X_2
/// norms. Deterministic configurations are solved once and replicated.
LomegaReport estimate_lomega(const Field& u0, const SolverConfig& cfg, std::size_t paths,
                             double rho, std::uint64_t seed, unsigned threads = 1,
                             std::size_t resamples = 200);

}  // namespace snls::harness
