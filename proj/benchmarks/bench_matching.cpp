#include <benchmark/benchmark.h>

#include "pairscan/eval/report.hpp"
#include "pairscan/random.hpp"

using namespace pairscan;

namespace {

std::vector<LabeledBox> random_boxes(Rng& rng, std::size_t n, double extent) {
  static const char* labels[] = {"tools", "gloves", "helmets"};
  std::vector<LabeledBox> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(0, extent), y = rng.uniform(0, extent);
    out.emplace_back(BBox(x, y, x + rng.uniform(10, 60), y + rng.uniform(10, 60)), labels[rng.index(3)]);
  }
  return out;
}

void BM_MatchSample(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto preds = random_boxes(rng, n, 200);
  const auto gts = random_boxes(rng, n, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::match_sample(preds, gts, {eval::ConditionVariant::BboxLabel, 0.5}));
  }
}
BENCHMARK(BM_MatchSample)->Arg(4)->Arg(16)->Arg(64);

void BM_Evaluate(benchmark::State& state) {
  Rng rng(2);
  std::vector<SampleRecord> truth;
  std::vector<std::vector<LabeledBox>> preds;
  for (int i = 0; i < state.range(0); ++i) {
    SampleRecord r;
    r.sample_id = "s" + std::to_string(i);
    r.target_image = r.sample_id + ".png";
    r.ground_truth = random_boxes(rng, rng.index(4) + 1, 500);
    preds.push_back(random_boxes(rng, rng.index(4), 500));
    truth.push_back(std::move(r));
  }
  const std::vector<eval::SampleFilter> filters{{}, {true, 0.0, eval::SizeRule::AnyBox}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::evaluate(truth, preds, AnomalyVocabulary::defaults(), filters));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(1200);

}  // namespace
