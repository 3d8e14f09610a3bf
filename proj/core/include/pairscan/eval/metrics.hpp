#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pairscan/eval/matching.hpp"
#include "pairscan/records.hpp"
#include "pairscan/vocabulary.hpp"

namespace pairscan::eval {

struct SampleScore {
  double f1 = 0.0;
};

/// 2tp / (2tp + fp + fn); 1.0 for a sample with no GT and no predictions.
SampleScore sample_f1(const SampleCounts& c) noexcept;

struct MacroScore {
  double m = 0.0;
  std::size_t n = 0;
};

/// Throws EmptyEvaluation for an empty list.
MacroScore macro_f1(std::span<const SampleScore> scores);

enum class SizeRule {
  AnyBox,  // drop a sample when any GT box is under the threshold
  AllBoxes,  // drop only when every GT box is
};

std::string_view to_string(SizeRule r) noexcept;

struct SampleFilter {
  bool exclude_state_driven = false;
  double min_size_px = 0.0;
  SizeRule rule = SizeRule::AnyBox;
};

struct FilterOutcome {
  std::vector<std::size_t> retained;  // ascending indices into the input
  std::size_t total = 0;

  /// "n / N"
  std::string fraction() const;
};

FilterOutcome filter_samples(std::span<const SampleRecord> samples, const AnomalyVocabulary& vocab,
                             const SampleFilter& filter);

struct GtOutcome {
  double size = 0.0;  // geo_mean_size of the GT box
  bool matched_bbox_only = false;
  bool matched_bbox_label = false;
};

struct QuartileAgreement {
  std::array<double, 4> bbox_only{};
  std::array<double, 4> bbox_label{};
  std::array<std::size_t, 4> counts{};
  std::array<std::pair<double, double>, 4> size_range{};  // min, max size per bin
  std::size_t total = 0;
};

/// Sorts by size (stable), splits into four equal-count bins with the
/// remainder going to the first bins, and reports matched-in-bin / total.
/// Throws TooFewBoxes below four boxes.
QuartileAgreement quartile_agreement(std::vector<GtOutcome> boxes);

}  // namespace pairscan::eval
