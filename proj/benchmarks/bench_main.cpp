#include <benchmark/benchmark.h>

#include <gem3d/compute.hpp>
#include <gem3d/metrics.hpp>
#include <gem3d/transpose.hpp>

using namespace gem3d;

namespace {

MatrixTile filled(std::size_t n) {
  MatrixTile t(n, Layer::A_SRAM);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) t.set({r, c}, Nibble((r * 7 + c) & 15));
  return t;
}

void BM_Transpose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto tile = filled(n);
  const auto cfg = default_config();
  for (auto _ : state) benchmark::DoNotOptimize(transpose_tile(tile, cfg));
}
BENCHMARK(BM_Transpose)->Arg(4)->Arg(16)->Arg(32);

void BM_Ewise(benchmark::State& state) {
  const auto op = state.range(0) ? EwiseOp::Mul : EwiseOp::Add;
  const auto a = filled(32), b = filled(32);
  const auto cfg = default_config();
  for (auto _ : state) {
    RandomStream rng(1, 0);
    benchmark::DoNotOptimize(run_ewise(EwiseJob{op, a, b}, cfg, rng));
  }
}
BENCHMARK(BM_Ewise)->Arg(0)->Arg(1);

void BM_LfsrBuild(benchmark::State& state) {
  const auto& taps = default_config().lfsr_taps;
  for (auto _ : state) benchmark::DoNotOptimize(build_lut(taps));
}
BENCHMARK(BM_LfsrBuild);

void BM_Enob(benchmark::State& state) {
  const auto lut = std::make_shared<const LfsrLut>(build_lut(default_config().lfsr_taps));
  const WordPipeline word(EwiseOp::Add, ComparatorModel{}, lut);
  for (auto _ : state) {
    RandomStream rng(42, 0);
    benchmark::DoNotOptimize(
        estimate_enob(word, ewise_level_sigma(EwiseOp::Add, kEnobFitDacSigmaLsb), 100, 16, rng));
  }
}
BENCHMARK(BM_Enob)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
