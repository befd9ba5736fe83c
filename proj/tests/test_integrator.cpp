#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "snls/error.hpp"
#include "snls/integrator.hpp"
#include "snls/noise.hpp"
#include "snls/norms.hpp"
#include "snls/propagator.hpp"
#include "support/oracles.hpp"

using namespace snls;

namespace {

GridPtr test_grid() { return SpectralGrid::make(20.0 * M_PI, 1024); }

Field gaussian(const GridPtr& g, double amplitude = 1.0) {
  return Field::from_function(g, [=](double x) { return Complex(amplitude * std::exp(-x * x)); });
}

SolverConfig config(double eps, double mu, double dt, double horizon) {
  SolverConfig cfg;
  cfg.exponent = NonlinearityExponent(eps, mu);
  cfg.dt = dt;
  cfg.horizon = horizon;
  return cfg;
}

std::shared_ptr<const NoiseModel> default_noise(const GridPtr& g) {
  return std::make_shared<const NoiseModel>(build_noise_model(g, {}));
}

double relative_drift(const Trajectory& tr) {
  const double m0 = mass(tr.initial());
  double worst = 0.0;
  for (const auto& s : tr.snapshots()) worst = std::max(worst, std::abs(mass(s) - m0) / m0);
  return worst;
}

}  // namespace

TEST(SolverConfig, StepsRequireIntegerRatio) {
  SolverConfig cfg = config(0, 1, 0.3, 1.0);
  EXPECT_THROW(cfg.steps(), InvalidParameter);
  cfg.dt = 0.01;
  EXPECT_EQ(cfg.steps(), 100u);
  cfg.record_stride = 0;
  EXPECT_THROW(cfg.steps(), InvalidParameter);
}

TEST(StepDeterministic, ZeroCouplingIsFreeEvolution) {
  auto g = test_grid();
  Field f = Field::from_function(g, [](double x) { return std::exp(-x * x) * std::polar(1.0, x); });
  SolverConfig cfg = config(0.3, 0.0, 1e-2, 1.0);
  StrichartzAccumulator acc;
  Field h = step_deterministic(f, cfg, acc);
  EXPECT_LT(lebesgue_norm(h - free_evolve(f, 1e-2), kInfinity), 1e-14);
  EXPECT_NEAR(h.time(), 1e-2, 1e-16);
  EXPECT_NEAR(acc.power_integral, l10_fifth_power(f) * 1e-2, 1e-16);
}

TEST(StepDeterministic, ConstantFieldKeepsModulus) {
  auto g = SpectralGrid::make(10.0, 64);
  Field f = Field::from_function(g, [](double) { return Complex(0.7, 0.2); });
  StrichartzAccumulator acc;
  Field h = step_deterministic(f, config(0.0, 1.0, 0.1, 1.0), acc);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_NEAR(std::abs(h[j]), std::abs(f[j]), 1e-14);
}

TEST(StepStochastic, ZeroNoiseModelIsBitwiseDeterministic) {
  auto g = test_grid();
  Field f = gaussian(g);
  SolverConfig det = config(0.5, 1.0, 1e-2, 1.0);
  SolverConfig sto = det;
  sto.noise = std::make_shared<const NoiseModel>(g);
  StrichartzAccumulator a1, a2;
  NoiseStream s{1, 0, 0};
  const NoiseIncrement inc = sample_increment(*sto.noise, sto.dt, s);
  Field x = step_deterministic(f, det, a1);
  Field y = step_stochastic(f, sto, a2, inc);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_EQ(x[j], y[j]);
  Trajectory t1 = solve(f, det);
  Trajectory t2 = solve(f, sto, {1, 0, 0});
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_EQ(t1.final()[j], t2.final()[j]);
}

TEST(StepStochastic, PureNoiseKeepsModulusPointwise) {
  // For mu = 0 the pointwise substep is the phase e^{-i dW}. Peeling off the
  // two exact half-steps of free evolution, |u| is unchanged pointwise by
  // every step, and the mass is conserved throughout.
  auto g = test_grid();
  Field u = Field::from_function(g, [](double x) { return std::exp(-x * x) * std::polar(1.0, x); });
  const double m0 = mass(u);
  SolverConfig cfg = config(0.0, 0.0, 1e-2, 1.0);
  cfg.noise = default_noise(g);
  StrichartzAccumulator acc;
  NoiseStream s{3, 0, 0};
  for (int n = 0; n < 50; ++n) {
    Field before = free_evolve(u, cfg.dt / 2);
    u = step_stochastic(u, cfg, acc, sample_increment(*cfg.noise, cfg.dt, s));
    Field after = free_evolve(u, -cfg.dt / 2);
    for (std::size_t j = 0; j < u.size(); ++j) {
      ASSERT_NEAR(std::abs(after[j]), std::abs(before[j]), 1e-14);
    }
  }
  EXPECT_NEAR(mass(u) / m0, 1.0, 1e-12);
}

TEST(StepStochastic, PointwisePhaseWithLieSchemeAndNoDispersionEffect) {
  // Lie: full linear step first, then phases. On a constant the linear step is
  // the identity, so after one step |u| equals |u0| pointwise.
  auto g = test_grid();
  Field f = Field::from_function(g, [](double) { return Complex(0.3, 0.4); });
  SolverConfig cfg = config(0.0, 0.0, 1e-2, 1.0);
  cfg.scheme = Scheme::kLie;
  cfg.noise = default_noise(g);
  StrichartzAccumulator acc;
  NoiseStream s{5, 0, 0};
  Field u = step_stochastic(f, cfg, acc, sample_increment(*cfg.noise, cfg.dt, s));
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_NEAR(std::abs(u[j]), 0.5, 1e-14);
}

TEST(Solve, ZeroInitialData) {
  auto g = test_grid();
  SolverConfig cfg = config(0.5, 1.0, 1e-2, 1.0);
  cfg.cutoff = CutoffSpec(1.0);
  Trajectory tr = solve(Field(g), cfg);
  EXPECT_TRUE(tr.final().is_zero());
  EXPECT_EQ(x_norm(tr), 0.0);
  EXPECT_FALSE(tr.stopping_time.has_value());
}

TEST(Solve, MassConservationDeterministicAndStochastic) {
  auto g = test_grid();
  SolverConfig cfg = config(1.0, 1.0, 1e-3, 1.0);
  cfg.record_stride = 50;
  EXPECT_LT(relative_drift(solve(gaussian(g), cfg)), 1e-10);
  cfg.noise = default_noise(g);
  cfg.exponent = NonlinearityExponent(0.0, 1.0);
  EXPECT_LT(relative_drift(solve(gaussian(g), cfg, {11, 0, 0})), 1e-9);
}

TEST(Solve, SmallTruncationLevelStops) {
  auto g = test_grid();
  SolverConfig cfg = config(0.0, 1.0, 1e-2, 1.0);
  cfg.cutoff = CutoffSpec(0.01);
  Field u0 = gaussian(g, 1.5);
  Trajectory tr = solve(u0, cfg);
  ASSERT_TRUE(tr.stopping_time.has_value());
  EXPECT_LT(*tr.stopping_time, 1.0);
  EXPECT_EQ(tr.factors().back(), 0.0);
  // Once the factor is 0 the run is free evolution.
  const auto& f = tr.factors();
  std::size_t first_zero = 0;
  while (f[first_zero] > 0.0) ++first_zero;
  for (std::size_t n = first_zero; n < f.size(); ++n) EXPECT_EQ(f[n], 0.0);
  for (std::size_t n = 1; n < f.size(); ++n) EXPECT_LE(f[n], f[n - 1]);
}

TEST(Solve, BoundaryMonitorRejectsSmallBox) {
  auto g = SpectralGrid::make(4.0, 128);
  SolverConfig cfg = config(0.0, 0.0, 1e-2, 1.0);
  EXPECT_THROW(solve(gaussian(g), cfg), BoxTooSmall);
}

TEST(Solve, StrangSelfConvergenceOrder) {
  auto g = test_grid();
  Field u0 = gaussian(g, 1.2);
  auto final_state = [&](double dt) {
    SolverConfig cfg = config(0.0, 1.0, dt, 1.0);
    cfg.record_stride = 1000000;
    return solve(u0, cfg).final();
  };
  Field ref = final_state(1e-4);
  const double e1 = lebesgue_norm(final_state(1e-2) - ref, 2.0);
  const double e2 = lebesgue_norm(final_state(1e-3) - ref, 2.0);
  EXPECT_GE(std::log10(e1 / e2), 1.9);
}

TEST(Solve, TimeReversible) {
  auto g = test_grid();
  Field u0 = gaussian(g, 1.2);
  SolverConfig cfg = config(0.5, 1.0, 1e-2, 1.0);
  StrichartzAccumulator acc;
  Field u = u0;
  for (int n = 0; n < 100; ++n) u = step_deterministic(u, cfg, acc);
  u = u.conj();
  for (int n = 0; n < 100; ++n) u = step_deterministic(u, cfg, acc);
  u = u.conj();
  // Strang with exact substeps is symmetric, so the round trip is exact up to
  // roundoff, well inside the O(dt^2) T bound.
  EXPECT_LT(lebesgue_norm(u - u0, 2.0), 1e-4 * 1.0);
  EXPECT_LT(lebesgue_norm(u - u0, 2.0), 1e-11);
}

TEST(Duhamel, LinearResidualIsRoundoff) {
  auto g = test_grid();
  SolverConfig cfg = config(0.0, 0.0, 1e-2, 1.0);
  Trajectory tr = solve(gaussian(g), cfg);
  EXPECT_LT(duhamel_residual(tr, 1.0), 1e-12);
  EXPECT_LT(duhamel_residual(tr, 0.5), 1e-12);
  EXPECT_THROW(duhamel_residual(tr, 0.505), RangeError);
  cfg.record_stride = 2;
  EXPECT_THROW(duhamel_residual(solve(gaussian(g), cfg), 1.0), RangeError);
}

TEST(Duhamel, DeterministicResidualIsFirstOrder) {
  auto g = test_grid();
  Field u0 = gaussian(g, 1.2);
  std::vector<double> res;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    SolverConfig cfg = config(1.0, 1.0, dt, 1.0);
    res.push_back(duhamel_residual(solve(u0, cfg), 1.0));
  }
  for (std::size_t i = 1; i < res.size(); ++i) EXPECT_NEAR(res[i - 1] / res[i], 2.0, 0.4);
}

TEST(Duhamel, StochasticResidualShrinksWithDt) {
  // Mean residual over 10 paths. The Ito correction is a quadrature of the
  // quadratic variation, so the residual decays like dt^{1/2}; the fitted
  // order is checked against that, not against 1.
  auto g = test_grid();
  Field u0 = gaussian(g);
  auto noise = default_noise(g);
  std::vector<double> dts = {4e-3, 2e-3, 1e-3}, logs, logr;
  for (double dt : dts) {
    SolverConfig cfg = config(0.0, 1.0, dt, 0.5);
    cfg.noise = noise;
    double mean = 0.0;
    for (std::uint64_t p = 0; p < 10; ++p) mean += duhamel_residual(solve(u0, cfg, {21, p, 0}), 0.5);
    logs.push_back(std::log(dt));
    logr.push_back(std::log(mean / 10));
  }
  const double order = oracle::slope(logs, logr);
  RecordProperty("observed_order", std::to_string(order));
  std::printf("stochastic Duhamel residual order %.3f\n", order);
  EXPECT_GT(order, 0.35);
  EXPECT_LT(order, 1.2);
}

TEST(Stability, IdenticalInputsGiveZeroResponse) {
  auto g = test_grid();
  Field w0 = gaussian(g);
  SolverConfig cfg = config(0.5, 1.0, 1e-2, 1.0);
  cfg.cutoff = CutoffSpec(2.0, 0.3);
  auto rep = stability_experiment(w0, w0, {}, cfg, cfg);
  EXPECT_EQ(rep.response, 0.0);
  EXPECT_EQ(rep.ratio, 0.0);
  cfg.noise = default_noise(g);
  rep = stability_experiment(w0, w0, {}, cfg, cfg, {4, 0, 0});
  EXPECT_EQ(rep.response, 0.0);
}

TEST(Stability, LinearResponseToInitialGapAndForcing) {
  auto g = test_grid();
  Field w0 = gaussian(g);
  Field bump = Field::from_function(g, [](double x) { return Complex(x * std::exp(-x * x)); });
  bump *= 1.0 / lebesgue_norm(bump, 2.0);
  SolverConfig cfg = config(0.5, 1.0, 1e-2, 1.0);
  std::vector<double> ratios;
  for (double delta : {1e-3, 1e-4, 1e-5}) {
    auto rep = stability_experiment(w0, w0 + delta * bump, {}, cfg, cfg);
    EXPECT_NEAR(rep.initial_gap, delta, 1e-12);
    ratios.push_back(rep.ratio);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_LT(*hi / *lo, 2.0);

  const double delta = 1e-4;
  Forcing e = [&](double) { return delta * bump; };
  auto rep = stability_experiment(w0, w0, e, cfg, cfg);
  EXPECT_NEAR(rep.forcing_norm, delta * 1.0, 1e-12);
  EXPECT_LE(rep.response, rep.ratio * rep.forcing_norm * (1 + 1e-12));
  EXPECT_LT(std::max(rep.ratio / ratios[1], ratios[1] / rep.ratio), 3.0);
}

TEST(StoppingTime, MonotoneAndIdenticalBeforeStop) {
  auto g = test_grid();
  Field u0 = gaussian(g, 1.2);
  SolverConfig a = config(0.25, 1.0, 1e-2, 1.0), b = a;
  a.noise = b.noise = default_noise(g);
  a.cutoff = CutoffSpec(0.3);
  b.cutoff = CutoffSpec(0.6);
  for (std::uint64_t p = 0; p < 4; ++p) {
    Trajectory ta = solve(u0, a, {8, p, 0}), tb = solve(u0, b, {8, p, 0});
    const double tau_a = ta.stopping_time.value_or(1.0), tau_b = tb.stopping_time.value_or(1.0);
    EXPECT_LE(tau_a, tau_b);
    for (std::size_t n = 0; n < ta.snapshots().size(); ++n) {
      if (ta.step_time(n) > tau_a) break;
      EXPECT_EQ(lebesgue_norm(ta.snapshots()[n] - tb.snapshots()[n], 2.0), 0.0);
    }
  }
}
