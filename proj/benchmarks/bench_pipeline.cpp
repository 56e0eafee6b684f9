#include <benchmark/benchmark.h>

#include <random>

#include "lmon/evaluation.hpp"
#include "lmon/pipeline.hpp"
#include "lmon/scene_synth.hpp"

namespace {

using namespace lmon;

const SynthFrame& cars_frame() {
  static const SynthFrame frame = [] {
    for (const auto& c : scenario_suite(1))
      if (c.name == "cars") return raycast(c.scene, LidarConfig{}, 1);
    return SynthFrame{};
  }();
  return frame;
}

void BM_Raycast(benchmark::State& state) {
  const auto suite = scenario_suite(1);
  const auto& scene = suite[3].scene;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(raycast(scene, LidarConfig{}, ++seed));
}
BENCHMARK(BM_Raycast)->Unit(benchmark::kMillisecond);

void BM_Project(benchmark::State& state) {
  const auto& f = cars_frame();
  const auto spec = LidarConfig{}.projection();
  for (auto _ : state) benchmark::DoNotOptimize(project(f.cloud, spec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.cloud.size()));
}
BENCHMARK(BM_Project)->Unit(benchmark::kMillisecond);

void BM_ObstacleScore(benchmark::State& state) {
  const auto images = project(cars_frame().cloud, LidarConfig{}.projection());
  const ObstacleParams params;
  for (auto _ : state) benchmark::DoNotOptimize(obstacle_score(images, params));
}
BENCHMARK(BM_ObstacleScore)->Unit(benchmark::kMillisecond);

void BM_ProcessFrame(benchmark::State& state) {
  const auto& f = cars_frame();
  const auto config = default_config();
  const OracleProvider oracle(f.annotations.boxes(), config.oracle_margin);
  for (auto _ : state) benchmark::DoNotOptimize(process_frame(f.cloud, oracle, oracle, config, &f.annotations));
}
BENCHMARK(BM_ProcessFrame)->Unit(benchmark::kMillisecond);

void BM_Dbscan(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(0.0, 36.0), y(-8.5, 8.5);
  std::vector<Point2> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {x(rng), y(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(dbscan(pts, 0.3, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dbscan)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

}  // namespace

BENCHMARK_MAIN();
