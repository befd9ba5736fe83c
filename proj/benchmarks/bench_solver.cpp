#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "snls/integrator.hpp"
#include "snls/noise.hpp"
#include "snls/norms.hpp"
#include "snls/propagator.hpp"

using namespace snls;

namespace {

GridPtr grid_of(benchmark::State& state) {
  return SpectralGrid::make(20.0 * M_PI, static_cast<std::size_t>(state.range(0)));
}

Field gaussian(const GridPtr& g) {
  return Field::from_function(g, [](double x) { return Complex(2.0 * std::exp(-x * x)); });
}

SolverConfig member(double dt) {
  SolverConfig cfg;
  cfg.exponent = NonlinearityExponent(0.5, 1.0);
  cfg.dt = dt;
  cfg.horizon = 1e6 * dt;
  cfg.boundary_tolerance = 0.0;
  return cfg;
}

}  // namespace

static void BM_FreeEvolve(benchmark::State& state) {
  Field f = gaussian(grid_of(state));
  for (auto _ : state) {
    free_evolve_in_place(f, 1e-3);
    benchmark::DoNotOptimize(f.values().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FreeEvolve)->RangeMultiplier(4)->Range(256, 16384);

static void BM_StepDeterministic(benchmark::State& state) {
  const GridPtr g = grid_of(state);
  Stepper stepper(gaussian(g), member(1e-3));
  for (auto _ : state) {
    stepper.advance();
    benchmark::DoNotOptimize(stepper.state().values().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StepDeterministic)->RangeMultiplier(4)->Range(256, 16384);

static void BM_StepStochastic(benchmark::State& state) {
  const GridPtr g = grid_of(state);
  SolverConfig cfg = member(1e-3);
  cfg.noise = std::make_shared<const NoiseModel>(build_noise_model(g, {}));
  Stepper stepper(gaussian(g), cfg);
  NoiseStream stream{1, 0, 0};
  for (auto _ : state) {
    const NoiseIncrement inc = sample_increment(*cfg.noise, cfg.dt, stream);
    stepper.advance(&inc);
    benchmark::DoNotOptimize(stepper.state().values().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StepStochastic)->RangeMultiplier(4)->Range(1024, 16384);

static void BM_SampleIncrement(benchmark::State& state) {
  const GridPtr g = grid_of(state);
  const NoiseModel model = build_noise_model(g, {});
  NoiseStream stream{1, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(sample_increment(model, 1e-3, stream));
}
BENCHMARK(BM_SampleIncrement)->Arg(1024)->Arg(4096);

static void BM_Norms(benchmark::State& state) {
  const Field f = gaussian(grid_of(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mass(f));
    benchmark::DoNotOptimize(l10_fifth_power(f));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Norms)->RangeMultiplier(4)->Range(256, 16384);

static void BM_X2OfLinearFlow(benchmark::State& state) {
  const Field f = gaussian(grid_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(linear_strichartz_norm(f, AdmissiblePair::x2(), 1.0, 100));
}
BENCHMARK(BM_X2OfLinearFlow)->Arg(1024);

BENCHMARK_MAIN();
