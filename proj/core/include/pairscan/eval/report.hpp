#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairscan/eval/matching.hpp"
#include "pairscan/eval/metrics.hpp"
#include "pairscan/jsonl.hpp"

namespace pairscan::eval {

inline constexpr std::array<ConditionVariant, 2> kConditions{ConditionVariant::BboxOnly,
                                                            ConditionVariant::BboxLabel};

struct SampleEvaluation {
  std::string sample_id;
  std::array<SampleMatch, 2> match;  // indexed like kConditions
  std::array<double, 2> f1{};
};

struct FilteredResult {
  SampleFilter filter;
  FilterOutcome outcome;
  std::array<std::optional<MacroScore>, 2> macro;  // empty when nothing is retained
  std::optional<QuartileAgreement> quartiles;      // empty below four GT boxes
};

struct EvaluationResult {
  double iou_threshold = 0.5;
  std::vector<SampleEvaluation> samples;  // input order
  std::vector<FilteredResult> rows;       // one per filter
};

/// predictions[i] belongs to truth[i].
EvaluationResult evaluate(std::span<const SampleRecord> truth,
                          std::span<const std::vector<LabeledBox>> predictions,
                          const AnomalyVocabulary& vocab, std::span<const SampleFilter> filters,
                          double iou_threshold = 0.5, std::size_t workers = 1);

/// Array with one object per (filter, condition).
Json report_json(const EvaluationResult& result);

// Renderers take report.json as input.
std::string report_csv(const Json& report);
std::string report_table(const Json& report);
/// Grouped bars, one group per quartile, for the first entry of each condition.
std::string quartile_svg(const Json& report);
std::string size_distribution_svg(const Json& report);

/// report.json, report.csv, quartile_agreement.svg, size_distribution.svg.
void write_report_files(const Json& report, const std::filesystem::path& out_dir);

}  // namespace pairscan::eval
