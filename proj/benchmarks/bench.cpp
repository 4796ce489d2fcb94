#include <benchmark/benchmark.h>

#include <cmath>

#include "dfrsim/allocation.hpp"
#include "dfrsim/propagation.hpp"
#include "dfrsim/scenario.hpp"
#include "dfrsim/spectrum_plan.hpp"

using namespace dfrsim;

namespace {

std::array<NetworkNode, 3> bench_macros() {
  const double r3 = std::sqrt(3.0);
  return {NetworkNode{1, Tier::macro, {0.0, 0.0}, 1500.0, 50.0, 1},
          NetworkNode{2, Tier::macro, {r3 * 1000.0, 0.0}, 1500.0, 50.0, 2},
          NetworkNode{3, Tier::macro, {r3 * 500.0, 1500.0}, 1500.0, 50.0, 3}};
}

void BM_BuildPlan(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_plan(10e6, 2e6));
  }
}
BENCHMARK(BM_BuildPlan);

void BM_TilePool(benchmark::State& state) {
  SpectrumPlan plan = build_plan(10e6, 2e6);
  std::vector<int> pool = edge_pool_order(1);
  int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tile_pool(plan, pool, k));
  }
}
BENCHMARK(BM_TilePool)->Arg(3)->Arg(16)->Arg(64);

void BM_HataPathLoss(benchmark::State& state) {
  MacroLinkParams link{900.0, 50.0, 1.5, 1.0536, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hata_path_loss(link, HataMode::paper));
  }
}
BENCHMARK(BM_HataPathLoss);

// Cost of one install including the group recomputation it triggers, at a
// given number of already-installed neighbors.
void BM_InstallFemto(benchmark::State& state) {
  SpectrumPlan plan = build_plan(10e6, 2e6);
  AllocationParams params;
  params.s_th_w = dbm_to_watts(-56.0);
  ZeroShadow shadow;
  const double ex = 900.0 * std::sqrt(3.0) / 2.0;
  const int preload = static_cast<int>(state.range(0));

  for (auto _ : state) {
    state.PauseTiming();
    World world(plan, bench_macros(), params);
    for (int k = 0; k < preload; ++k) {
      world.install_femto(NetworkNode{20 + k, Tier::femto, {ex + k % 7, 450.0 + k / 7},
                                      0.01, 2.0, 0},
                          shadow);
    }
    state.ResumeTiming();
    world.install_femto(NetworkNode{999, Tier::femto, {ex, 450.0}, 0.01, 2.0, 0}, shadow);
  }
}
BENCHMARK(BM_InstallFemto)->Arg(0)->Arg(15)->Arg(40);

// One full Monte-Carlo trial: deployment, sensing, allocation, evaluation.
void BM_TrialEvaluate(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.trials = 1;
  SpectrumPlan plan = build_plan(cfg.macro_width_hz, cfg.guard_width_hz);
  const int n = static_cast<int>(state.range(0));
  long trial = 0;
  for (auto _ : state) {
    Deployment dep = generate_deployment(cfg, n, trial);
    auto alloc = apply_scheme(dep, Scheme::dfr_guard, plan, cfg, trial);
    benchmark::DoNotOptimize(evaluate(dep, alloc, Scheme::dfr_guard, plan, cfg, trial));
    ++trial;
  }
}
BENCHMARK(BM_TrialEvaluate)->Arg(15)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
