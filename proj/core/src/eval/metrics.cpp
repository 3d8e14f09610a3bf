#include "pairscan/eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pairscan/error.hpp"

namespace pairscan::eval {

SampleScore sample_f1(const SampleCounts& c) noexcept {
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return {1.0};
  return {static_cast<double>(2 * c.tp) / static_cast<double>(denom)};
}

MacroScore macro_f1(std::span<const SampleScore> scores) {
  if (scores.empty()) fail(ErrorKind::EmptyEvaluation, "no samples to average");
  // sorted summation
  std::vector<double> v;
  v.reserve(scores.size());
  for (const auto& s : scores) v.push_back(s.f1);
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (const double x : v) sum += x;
  return {sum / static_cast<double>(v.size()), v.size()};
}

std::string_view to_string(SizeRule r) noexcept { return r == SizeRule::AnyBox ? "any" : "all"; }

std::string FilterOutcome::fraction() const {
  return std::to_string(retained.size()) + " / " + std::to_string(total);
}

FilterOutcome filter_samples(std::span<const SampleRecord> samples, const AnomalyVocabulary& vocab,
                             const SampleFilter& filter) {
  require(std::isfinite(filter.min_size_px) && filter.min_size_px >= 0.0, ErrorKind::InvalidArgument,
          "size threshold must be >= 0");
  FilterOutcome out;
  out.total = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& gts = samples[i].ground_truth;
    if (filter.exclude_state_driven &&
        std::any_of(gts.begin(), gts.end(), [&](const LabeledBox& b) { return vocab.is_state_driven(b.label()); })) {
      continue;
    }
    const auto small = [&](const LabeledBox& b) { return geo_mean_size(b.bbox()) < filter.min_size_px; };
    const bool drop = filter.rule == SizeRule::AnyBox
                          ? std::any_of(gts.begin(), gts.end(), small)
                          : !gts.empty() && std::all_of(gts.begin(), gts.end(), small);
    if (!drop) out.retained.push_back(i);
  }
  return out;
}

QuartileAgreement quartile_agreement(std::vector<GtOutcome> boxes) {
  if (boxes.size() < 4) {
    fail(ErrorKind::TooFewBoxes, "quartiles need at least 4 boxes, got " + std::to_string(boxes.size()));
  }
  std::stable_sort(boxes.begin(), boxes.end(),
                   [](const GtOutcome& a, const GtOutcome& b) { return a.size < b.size; });
  QuartileAgreement q;
  q.total = boxes.size();
  const std::size_t base = boxes.size() / 4;
  const std::size_t extra = boxes.size() % 4;
  std::size_t begin = 0;
  for (std::size_t bin = 0; bin < 4; ++bin) {
    const std::size_t count = base + (bin < extra ? 1 : 0);
    std::size_t only = 0, label = 0;
    for (std::size_t i = begin; i < begin + count; ++i) {
      only += boxes[i].matched_bbox_only ? 1 : 0;
      label += boxes[i].matched_bbox_label ? 1 : 0;
    }
    q.counts[bin] = count;
    q.size_range[bin] = {boxes[begin].size, boxes[begin + count - 1].size};
    q.bbox_only[bin] = static_cast<double>(only) / static_cast<double>(q.total);
    q.bbox_label[bin] = static_cast<double>(label) / static_cast<double>(q.total);
    begin += count;
  }
  return q;
}

}  // namespace pairscan::eval
