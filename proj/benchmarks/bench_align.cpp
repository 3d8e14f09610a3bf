#include <benchmark/benchmark.h>

#include "pairscan/align/compose.hpp"
#include "pairscan/align/estimation.hpp"
#include "pairscan/align/features.hpp"
#include "support/fixtures.hpp"

using namespace pairscan;

namespace {

void BM_Ransac(benchmark::State& state) {
  Rng rng(3);
  const Homography h = fixtures::random_homography(rng, 640, 480);
  auto c = fixtures::exact_correspondences(h, rng, static_cast<std::size_t>(state.range(0)), 640, 480);
  for (std::size_t i = 0; i < c.size() * 3 / 10; ++i) c[i].p_tgt = {rng.uniform(0, 639), rng.uniform(0, 479)};
  align::RansacConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(align::estimate_homography_ransac(c, cfg));
}
BENCHMARK(BM_Ransac)->Arg(50)->Arg(500);

void BM_MatchFeatures(benchmark::State& state) {
  const RasterImage scene = fixtures::corner_scene(660, 500, 5, 3, 200);
  const RasterImage ref = scene.crop(0, 0, 640, 480);
  const RasterImage tgt = scene.crop(14, 9, 640, 480);
  for (auto _ : state) benchmark::DoNotOptimize(align::match_features(ref, tgt));
}
BENCHMARK(BM_MatchFeatures)->Unit(benchmark::kMillisecond);

void BM_Warp(benchmark::State& state) {
  Rng rng(4);
  const RasterImage img = fixtures::smooth_texture(640, 480, 6, 3);
  const Homography h = fixtures::random_homography(rng, 640, 480);
  for (auto _ : state) benchmark::DoNotOptimize(align::warp_reference(img, h, 640, 480));
}
BENCHMARK(BM_Warp)->Unit(benchmark::kMillisecond);

}  // namespace
