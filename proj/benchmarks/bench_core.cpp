#include <benchmark/benchmark.h>

#include <vector>

#include "fracheat/chaos.hpp"
#include "fracheat/direct_solver.hpp"
#include "fracheat/exponent.hpp"
#include "fracheat/gaussian_field.hpp"
#include "fracheat/rng.hpp"
#include "fracheat/stable_path.hpp"

namespace {

using namespace fracheat;

Path brownian(std::uint64_t stream, std::size_t steps) {
  RngStream rng(7, stream);
  const std::vector<double> x0{0.0};
  return sample_path(2.0, 1, TimeGrid::uniform(1.0, steps), x0, rng);
}

void BM_StablePath(benchmark::State& state) {
  const double alpha = state.range(1) / 10.0;
  const auto grid = TimeGrid::uniform(1.0, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> x0{0.0};
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_path(alpha, 1, grid, x0, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StablePath)->ArgsProduct({{256, 1024}, {10, 15, 20}});

void BM_SelfExponent(benchmark::State& state) {
  const auto path = brownian(0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(self_exponent(path, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SelfExponent)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_CrossExponent(benchmark::State& state) {
  const auto a = brownian(1, static_cast<std::size_t>(state.range(0)));
  const auto b = brownian(2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cross_exponent(a, b, 1));
}
BENCHMARK(BM_CrossExponent)->Arg(256)->Arg(1024);

void BM_MollifiedInner(benchmark::State& state) {
  const auto a = brownian(3, 256);
  const auto b = brownian(4, 256);
  const MollifierParams moll{0.05, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(mollified_inner(a, b, moll, 1));
}
BENCHMARK(BM_MollifiedInner);

void BM_WickWeights(benchmark::State& state) {
  std::vector<Path> paths;
  for (int i = 0; i < state.range(0); ++i) paths.push_back(brownian(10 + static_cast<std::uint64_t>(i), 64));
  const MollifierParams moll{0.05, 0.05};
  RngStream rng(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_wick_weights(paths, moll, 1, rng));
}
BENCHMARK(BM_WickWeights)->Arg(8)->Arg(32);

void BM_ChaosTermClosedForm(benchmark::State& state) {
  ChaosOptions opt;
  opt.qmc_points = 1 << 12;
  opt.qmc_shifts = 8;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chaos_term(n, 2.0, 1, 1.0, InitialCondition::constant(), opt));
}
BENCHMARK(BM_ChaosTermClosedForm)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_ChaosTermFourier(benchmark::State& state) {
  ChaosOptions opt;
  opt.force_fourier = true;
  opt.mc_samples = 1 << 15;
  for (auto _ : state) benchmark::DoNotOptimize(chaos_term(1, 1.5, 1, 1.0, InitialCondition::constant(), opt));
}
BENCHMARK(BM_ChaosTermFourier)->Unit(benchmark::kMillisecond);

void BM_SplitStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto grid = TorusGrid::make(0.5, n, 64, 0.0);
  const SplitStepSolver solver(grid, 2.0);
  auto u = solver.initial_state(InitialCondition::constant());
  const std::vector<double> noise(n, 0.1);
  for (auto _ : state) {
    solver.step(u, noise.data(), grid.dt());
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_SplitStep)->Arg(64)->Arg(256)->Arg(1024);

void BM_NoiseSlab(benchmark::State& state) {
  const auto grid = TorusGrid::make(0.5, static_cast<std::size_t>(state.range(0)), 32, 0.0);
  RngStream rng(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_noise_slab(grid, 0.1, rng));
}
BENCHMARK(BM_NoiseSlab)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
