#include "snls/harness/monte_carlo.hpp"

#include <cmath>
#include <random>

#include "snls/error.hpp"
#include "snls/harness/parallel.hpp"
#include "snls/norms.hpp"
#include "snls/rng.hpp"

namespace snls::harness {
namespace {

// Keeps bootstrap draws apart from the noise substreams, which use small path ids.
constexpr std::uint64_t kBootstrapStream = 0xB0075A3B1E000000ull;

}  // namespace

double power_mean(std::span<const double> samples, double rho) {
  if (samples.empty()) throw InvalidParameter("power mean of an empty sample");
  if (!(rho >= 1.0)) throw InvalidParameter("power mean needs rho >= 1");
  double scale = 0.0;
  for (double v : samples) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : samples) sum += std::pow(std::abs(v) / scale, rho);
  return scale * std::pow(sum / static_cast<double>(samples.size()), 1.0 / rho);
}

std::vector<std::vector<std::size_t>> bootstrap_indices(std::size_t paths, std::size_t resamples,
                                                        std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> sets(resamples, std::vector<std::size_t>(paths));
  if (paths == 0) return sets;
  std::uniform_int_distribution<std::size_t> pick(0, paths - 1);
  for (std::size_t r = 0; r < resamples; ++r) {
    auto gen = substream(seed, kBootstrapStream, r);
    for (auto& i : sets[r]) i = pick(gen);
  }
  return sets;
}

LomegaEstimate summarize_lomega(std::span<const double> samples, double rho, std::uint64_t seed,
                                std::size_t resamples) {
  LomegaEstimate est;
  est.paths = samples.size();
  est.value = power_mean(samples, rho);
  if (samples.size() < 2) return est;
  const auto sets = bootstrap_indices(samples.size(), resamples, seed);
  std::vector<double> draw(samples.size());
  est.standard_error = bootstrap_error(sets, [&](const std::vector<std::size_t>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) draw[i] = samples[s[i]];
    return power_mean(draw, rho);
  });
  return est;
}

PathNorms run_path(const Field& u0, const SolverConfig& cfg, NoiseStream stream,
                   std::size_t monitor_every) {
  try {
    Stepper stepper(u0, cfg);
    PathNorms out;
    const double m0 = mass(u0);
    const auto monitor = [&](const Field& u) {
      if (m0 > 0.0) out.mass_drift = std::max(out.mass_drift, std::abs(mass(u) - m0) / m0);
      if (cfg.boundary_tolerance <= 0.0) return;
      const double leak = boundary_mass_fraction(u);
      if (leak > cfg.boundary_tolerance) {
        throw BoxTooSmall("boundary mass fraction " + show(leak) + " at t = " + show(u.time()));
      }
    };
    const auto check_stop = [&] {
      if (out.stopping_time || !cfg.cutoff.is_active()) return;
      if (cfg.cutoff.offset() + stepper.accumulator().power_integral >= cfg.cutoff.scale().value()) {
        out.stopping_time = stepper.state().time();
      }
    };
    check_stop();
    while (!stepper.done()) {
      if (cfg.stochastic()) {
        const NoiseIncrement inc = sample_increment(*cfg.noise, cfg.dt, stream);
        stepper.advance(&inc);
      } else {
        stepper.advance();
      }
      check_stop();
      if (monitor_every > 0 && stepper.steps_taken() % monitor_every == 0) monitor(stepper.state());
    }
    monitor(stepper.state());
    out.x1 = stepper.accumulator().sup_mass;
    out.x2 = std::pow(stepper.accumulator().power_integral, 0.2);
    return out;
  } catch (const ExperimentFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw ExperimentFailure(e.what(), stream.path);
  }
}

LomegaReport estimate_lomega(const Field& u0, const SolverConfig& cfg, std::size_t paths,
                             double rho, std::uint64_t seed, unsigned threads,
                             std::size_t resamples) {
  if (paths == 0) throw InvalidParameter("need at least one path");
  if (!(rho >= 5.0)) throw InvalidParameter("rho must be at least 5");
  LomegaReport rep;
  rep.per_path.resize(paths);
  if (cfg.stochastic()) {
    parallel_for(paths, threads, [&](std::size_t p) {
      rep.per_path[p] = run_path(u0, cfg, NoiseStream{seed, p, 0});
    });
  } else {
    const PathNorms once = run_path(u0, cfg, NoiseStream{seed, 0, 0});
    for (auto& p : rep.per_path) p = once;
  }
  std::vector<double> xs(paths), x2s(paths);
  for (std::size_t p = 0; p < paths; ++p) {
    xs[p] = rep.per_path[p].x();
    x2s[p] = rep.per_path[p].x2;
  }
  rep.x = summarize_lomega(xs, rho, seed, resamples);
  rep.x2 = summarize_lomega(x2s, rho, seed, resamples);
  return rep;
}

}  // namespace snls::harness
