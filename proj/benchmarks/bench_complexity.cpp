// SPDX-License-Identifier: Apache-2.0
#include "isac/model.hpp"
#include "isac/pipeline.hpp"

#include <benchmark/benchmark.h>

namespace {

using isac::SystemConfig;

constexpr int kOuter = 5;

SystemConfig base_config() {
  SystemConfig cfg;
  cfg.outer_iters = kOuter;
  return cfg;
}

// Solves with a fixed outer budget; reports time per outer iteration.
void run_solve(benchmark::State& state, SystemConfig cfg) {
  const isac::ChannelSet ch = isac::generate_channels(cfg, cfg.rng_seed);
  const isac::SymbolMatrix s = isac::generate_symbols(cfg, cfg.rng_seed);
  const isac::AngleGrid grid = isac::AngleGrid::uniform(1.0);
  const std::vector<double> targets{-45.0, 0.0, 45.0};
  const isac::DesiredCovariance cov = isac::synthesize_desired_covariance(
      isac::desired_beampattern(targets, 10.0, grid), grid, cfg.total_power, cfg.n_antennas);
  int iterations = 0;
  for (auto _ : state) {
    const isac::SolveResult res = isac::solve(cfg, ch, s, cov);
    iterations += res.iterations_used;
    benchmark::DoNotOptimize(res.x.data());
  }
  state.counters["outer_iters"] = benchmark::Counter(iterations, benchmark::Counter::kAvgIterations);
  state.SetComplexityN(state.range(0));
}

void BM_FrameLength(benchmark::State& state) {
  SystemConfig cfg = base_config();
  cfg.frame_len = static_cast<int>(state.range(0));
  run_solve(state, cfg);
}
BENCHMARK(BM_FrameLength)->RangeMultiplier(2)->Range(16, 256)->Complexity()->Unit(benchmark::kMillisecond);

void BM_RisElements(benchmark::State& state) {
  SystemConfig cfg = base_config();
  cfg.n_ris = static_cast<int>(state.range(0));
  run_solve(state, cfg);
}
BENCHMARK(BM_RisElements)->Arg(0)->Arg(10)->Arg(20)->Arg(40)->Arg(80)->Complexity()->Unit(benchmark::kMillisecond);

void BM_Antennas(benchmark::State& state) {
  SystemConfig cfg = base_config();
  cfg.n_antennas = static_cast<int>(state.range(0));
  cfg.frame_len = std::max(cfg.frame_len, cfg.n_antennas);
  run_solve(state, cfg);
}
BENCHMARK(BM_Antennas)->RangeMultiplier(2)->Range(4, 64)->Complexity()->Unit(benchmark::kMillisecond);

// Per-block breakdown from the built-in probe.
void BM_BlockBreakdown(benchmark::State& state) {
  SystemConfig cfg = base_config();
  cfg.n_ris = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto rows = isac::complexity_probe({cfg}, kOuter);
    state.counters["waveform_ms"] = rows[0].seconds_waveform * 1e3;
    state.counters["template_ms"] = rows[0].seconds_template * 1e3;
    state.counters["phase_ms"] = rows[0].seconds_phase * 1e3;
  }
}
BENCHMARK(BM_BlockBreakdown)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
