#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "pairscan/geometry.hpp"

namespace pairscan::eval {

enum class ConditionVariant { BboxOnly, BboxLabel };

std::string_view to_string(ConditionVariant v) noexcept;

struct EvalCondition {
  ConditionVariant variant = ConditionVariant::BboxOnly;
  double iou_threshold = 0.5;

  void validate() const;
};

struct SampleCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  friend bool operator==(const SampleCounts&, const SampleCounts&) = default;
};

struct MatchPair {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double iou = 0.0;
};

struct SampleMatch {
  SampleCounts counts;
  std::vector<MatchPair> pairs;  // ascending pred index
};

/// (p, g) is admissible when iou >= threshold and, for BboxLabel, the labels
/// are byte-equal.
bool admissible(const LabeledBox& pred, const LabeledBox& gt, const EvalCondition& cond) noexcept;

/// Maximum-cardinality one-to-one matching over the admissible pairs
/// (augmenting paths, predictions visited in order).
SampleMatch match_sample(std::span<const LabeledBox> preds, std::span<const LabeledBox> gts,
                         const EvalCondition& cond);

}  // namespace pairscan::eval
