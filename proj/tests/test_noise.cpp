#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "snls/error.hpp"
#include "snls/noise.hpp"
#include "snls/rng.hpp"

using namespace snls;

namespace {

GridPtr noise_grid() { return SpectralGrid::make(20.0 * M_PI, 1024); }

double dot(const RealField& a, const RealField& b) {
  double s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a.values[j] * b.values[j];
  return s * a.grid->dx();
}

// Random orthogonal matrix from Gram-Schmidt on Gaussian columns.
std::vector<std::vector<double>> random_rotation(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  for (auto& row : q)
    for (auto& v : row) v = n01(gen);
  for (std::size_t i = 0; i < n; ++i) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        double c = 0;
        for (std::size_t k = 0; k < n; ++k) c += q[i][k] * q[j][k];
        for (std::size_t k = 0; k < n; ++k) q[i][k] -= c * q[j][k];
      }
      double nrm = 0;
      for (double v : q[i]) nrm += v * v;
      for (double& v : q[i]) v /= std::sqrt(nrm);
    }
  }
  return q;
}

}  // namespace

TEST(Philox, KnownAnswer) {
  auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
  auto ff = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(ff[0], 0x408f276du);
  EXPECT_EQ(ff[1], 0x41c83b0eu);
  EXPECT_EQ(ff[2], 0xa20bc7c6u);
  EXPECT_EQ(ff[3], 0x6d5451fdu);
}

TEST(Philox, SubstreamsAreReproducibleAndDistinct) {
  auto a = substream(42, 3, 7), b = substream(42, 3, 7), c = substream(42, 4, 7);
  bool differ = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    differ |= (x != z);
  }
  EXPECT_TRUE(differ);
}

TEST(NoiseModel, RankZero) {
  auto g = noise_grid();
  NoiseModelParams p;
  p.rank = 0;
  NoiseModel m = build_noise_model(g, p);
  EXPECT_EQ(m.rank(), 0u);
  EXPECT_EQ(m.correction().max_abs(), 0.0);
  EXPECT_EQ(ito_stratonovich_correction(m).max_abs(), 0.0);
  NoiseStream s{1, 0, 0};
  auto inc = sample_increment(m, 0.01, s);
  EXPECT_EQ(inc.delta_w.max_abs(), 0.0);
  EXPECT_TRUE(inc.gaussians.empty());
}

TEST(NoiseModel, InvariantsAndSingularValues) {
  auto g = noise_grid();
  NoiseModelParams p;
  p.rank = 6;
  p.decay = 1.5;
  NoiseModel m = build_noise_model(g, p);
  ASSERT_EQ(m.rank(), 6u);
  double trace_bound = 0;
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR(m.singular_values()[k], std::pow(2.0 + k, -1.5), 1e-15);
    if (k > 0) EXPECT_LT(m.singular_values()[k], m.singular_values()[k - 1]);
    trace_bound += std::pow(2.0 + k, -1.5);
    for (std::size_t l = 0; l < 6; ++l) {
      EXPECT_NEAR(dot(m.input_basis()[k], m.input_basis()[l]), k == l ? 1.0 : 0.0, 1e-12);
      EXPECT_NEAR(dot(m.modes()[k], m.modes()[l]), k == l ? 1.0 : 0.0, 1e-12);
    }
    EXPECT_TRUE(std::isfinite(weighted_sobolev_norm(m.modes()[k], 2, 2)));
  }
  EXPECT_LE(m.trace(), trace_bound + 1e-15);
  // Phi e_k = c_k g_k.
  RealField img = m.apply(m.input_basis()[2]);
  for (std::size_t j = 0; j < img.size(); ++j)
    EXPECT_NEAR(img.values[j], m.singular_values()[2] * m.modes()[2].values[j], 1e-12);
}

TEST(NoiseModel, RejectsBadParameters) {
  auto g = noise_grid();
  NoiseModelParams p;
  p.decay = 1.0;
  EXPECT_THROW(build_noise_model(g, p), InvalidParameter);
  p.decay = 2.0;
  p.width = 0.0;
  EXPECT_THROW(build_noise_model(g, p), InvalidParameter);
  p.width = 1.0;
  p.rank = 200;
  EXPECT_THROW(build_noise_model(SpectralGrid::make(10.0, 64), p), ResolutionError);
}

TEST(Correction, RankOneIsSquaredMode) {
  auto g = noise_grid();
  NoiseModelParams p;
  p.rank = 1;
  NoiseModel m = build_noise_model(g, p);
  RealField f = ito_stratonovich_correction(m);
  const double c1 = m.singular_values()[0];
  // Independent evaluation: envelope times h_0 is e^{-x^2}, unit L^2 norm
  // after scaling by (2/pi)^{1/4}.
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double x = g->x(j);
    const double g1 = std::pow(2.0 / M_PI, 0.25) * std::exp(-x * x);
    EXPECT_NEAR(f.values[j], c1 * c1 * g1 * g1, 1e-13);
  }
}

TEST(Correction, NonnegativeAndDecaysAtBoundary) {
  auto g = noise_grid();
  NoiseModel m = build_noise_model(g, {});
  const RealField& f = m.correction();
  const double peak = f.max_abs();
  for (std::size_t j = 0; j < f.size(); ++j) {
    EXPECT_GE(f.values[j], 0.0);
    if (std::abs(g->x(j)) > 0.875 * g->half_length()) EXPECT_LT(f.values[j], 1e-12 * peak);
  }
}

TEST(Correction, BasisIndependence) {
  auto g = noise_grid();
  NoiseModelParams p;
  p.rank = 4;
  NoiseModel m = build_noise_model(g, p);
  // Pair rotation from the example.
  {
    std::vector<RealField> rotated = m.input_basis();
    for (std::size_t j = 0; j < rotated[0].size(); ++j) {
      const double a = m.input_basis()[0].values[j], b = m.input_basis()[1].values[j];
      rotated[0].values[j] = (a + b) / std::sqrt(2.0);
      rotated[1].values[j] = (a - b) / std::sqrt(2.0);
    }
    RealField f(g);
    for (const auto& e : rotated) {
      RealField img = m.apply(e);
      for (std::size_t j = 0; j < f.size(); ++j) f.values[j] += img.values[j] * img.values[j];
    }
    for (std::size_t j = 0; j < f.size(); ++j)
      EXPECT_NEAR(f.values[j], m.correction().values[j], 1e-12);
  }
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto q = random_rotation(4, gen);
    RealField f(g);
    for (std::size_t i = 0; i < 4; ++i) {
      RealField e(g);
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t j = 0; j < e.size(); ++j) e.values[j] += q[i][k] * m.input_basis()[k].values[j];
      RealField img = m.apply(e);
      for (std::size_t j = 0; j < f.size(); ++j) f.values[j] += img.values[j] * img.values[j];
    }
    double worst = 0;
    for (std::size_t j = 0; j < f.size(); ++j)
      worst = std::max(worst, std::abs(f.values[j] - m.correction().values[j]));
    EXPECT_LT(worst, 1e-12);
  }
}

TEST(Increment, ReproducibleAndReconstructible) {
  auto g = noise_grid();
  NoiseModel m = build_noise_model(g, {});
  NoiseStream s1{99, 5, 0}, s2{99, 5, 0};
  auto a = sample_increment(m, 0.01, s1);
  auto b = sample_increment(m, 0.01, s2);
  EXPECT_EQ(s1.step, 1u);
  EXPECT_EQ(a.delta_w.values, b.delta_w.values);
  auto r = reconstruct_increment(m, 0.01, a.gaussians);
  EXPECT_EQ(r.delta_w.values, a.delta_w.values);
  // delta_w = sqrt(dt) sum c_k xi_k g_k.
  for (std::size_t j = 0; j < a.delta_w.size(); j += 37) {
    double v = 0;
    for (std::size_t k = 0; k < m.rank(); ++k)
      v += m.singular_values()[k] * a.gaussians[k] * m.modes()[k].values[j];
    EXPECT_NEAR(a.delta_w.values[j], 0.1 * v, 1e-14);
  }
}

namespace {

struct Moments {
  double mean, var, se_mean, se_var;
};

Moments point_moments(const NoiseModel& m, double dt, std::size_t x_index, std::size_t samples,
                      std::uint64_t seed) {
  double s1 = 0, s2 = 0, s4 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    NoiseStream st{seed, i, 0};
    const double w = sample_increment(m, dt, st).delta_w.values[x_index];
    s1 += w;
    s2 += w * w;
    s4 += w * w * w * w;
  }
  const double n = static_cast<double>(samples);
  const double mean = s1 / n;
  const double ex2 = s2 / n;
  return {mean, ex2, std::sqrt(ex2 / n), std::sqrt((s4 / n - ex2 * ex2) / n)};
}

}  // namespace

TEST(Increment, VarianceMatchesAnalyticSum) {
  auto g = noise_grid();
  NoiseModel m = build_noise_model(g, {});
  const double dt = 0.01;
  const std::size_t x0 = g->size() / 2 + 3;
  double expected = 0;
  for (std::size_t k = 0; k < m.rank(); ++k) {
    const double v = m.singular_values()[k] * m.modes()[k].values[x0];
    expected += v * v;
  }
  expected *= dt;
  auto mom = point_moments(m, dt, x0, 100000, 2024);
  EXPECT_LT(std::abs(mom.mean), 3 * mom.se_mean);
  EXPECT_LT(std::abs(mom.var - expected), 3 * mom.se_var);
}

TEST(Increment, DtScalingAndStepIndependence) {
  auto g = noise_grid();
  NoiseModel m = build_noise_model(g, {});
  const std::size_t x0 = g->size() / 2;
  auto a = point_moments(m, 0.01, x0, 20000, 1);
  auto b = point_moments(m, 0.04, x0, 20000, 2);
  const double ratio = b.var / a.var;
  const double se = ratio * std::hypot(a.se_var / a.var, b.se_var / b.var);
  EXPECT_LT(std::abs(ratio - 4.0), 3 * se);

  // Covariance between consecutive steps on a path.
  const std::size_t n = 20000;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t p = 0; p < n; ++p) {
    NoiseStream st{77, p, 0};
    const double x = sample_increment(m, 0.01, st).delta_w.values[x0];
    const double y = sample_increment(m, 0.01, st).delta_w.values[x0];
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double cov = sxy / n;
  const double se_cov = std::sqrt(sxx / n * syy / n / n);
  EXPECT_LT(std::abs(cov), 4 * se_cov);
}
