#include <benchmark/benchmark.h>

#include <vector>

#include <actimetry/entropy.hpp>
#include <actimetry/features.hpp>
#include <actimetry/model.hpp>
#include <actimetry/rng.hpp>
#include <actimetry/segmentation.hpp>
#include <actimetry/synth.hpp>

using namespace actimetry;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(0, 100);
  return v;
}

void BM_PermEntropy(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(perm_entropy(x, 5, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PermEntropy)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_FuzzyEntropy(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(fuzzy_entropy(x, 2, 0.2, 2, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FuzzyEntropy)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

void BM_DistEntropy(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(dist_entropy(x, 2, 512));
}
BENCHMARK(BM_DistEntropy)->RangeMultiplier(4)->Range(64, 1024);

void BM_SvdEntropy(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(svd_entropy(x, 7, 1));
}
BENCHMARK(BM_SvdEntropy)->RangeMultiplier(4)->Range(64, 4096);

void BM_PhaseEntropy(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(phase_entropy(x, 64, 2));
}
BENCHMARK(BM_PhaseEntropy)->RangeMultiplier(4)->Range(64, 4096);

void BM_ChangePoints(benchmark::State& state) {
  SynthConfig cfg;
  cfg.days = static_cast<int>(state.range(0));
  const auto subject = generate_subject(cfg, 0, 0, "B");
  const SegmentationConfig seg;
  std::vector<double> counts;
  for (const auto& e : subject.series.epochs) counts.push_back(e.count);
  const auto smoothed = moving_average(counts, seg.smoothing_window);
  for (auto _ : state) benchmark::DoNotOptimize(detect_change_points(smoothed, seg));
}
BENCHMARK(BM_ChangePoints)->Arg(1)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_SegmentPipeline(benchmark::State& state) {
  SynthConfig cfg;
  const auto subject = generate_subject(cfg, 0, 0, "B");
  for (auto _ : state) benchmark::DoNotOptimize(segment_pipeline(subject.series, {}));
}
BENCHMARK(BM_SegmentPipeline)->Unit(benchmark::kMillisecond);

void BM_ExtractAll(benchmark::State& state) {
  SynthConfig cfg;
  const auto seg = segment_pipeline(generate_subject(cfg, 0, 0, "B").series, {});
  const auto grid = FeatureGrid::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(extract_all(seg, grid));
}
BENCHMARK(BM_ExtractAll)->Unit(benchmark::kMillisecond);

void BM_Loocv(benchmark::State& state) {
  Rng rng(9);
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix x(n, 4);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < 4; ++c) x(i, c) = rng.normal();
    y[i] = static_cast<int>(i % 2);
  }
  const ModelConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(loocv(x, y, cfg));
}
BENCHMARK(BM_Loocv)->Arg(78)->Arg(200);

}  // namespace
BENCHMARK_MAIN();
