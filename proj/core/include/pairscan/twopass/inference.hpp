#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pairscan/client/model_client.hpp"
#include "pairscan/image.hpp"
#include "pairscan/records.hpp"
#include "pairscan/synth/prompt.hpp"
#include "pairscan/vocabulary.hpp"

namespace pairscan::twopass {

inline constexpr double kDefaultCropMargin = 0.1;

struct InferenceConfig {
  synth::PromptStyle style = synth::PromptStyle::specific();
  double margin_frac = kDefaultCropMargin;
  int max_tokens = 1024;
  double temperature = 0.0;
  bool single_pass = false;
  std::size_t workers = 4;  // samples in flight

  void validate() const;
};

/// First template of `style`, filled with every vocabulary label in order,
/// followed by the output-format instruction.
std::string detection_prompt(const AnomalyVocabulary& vocab, const synth::PromptStyle& style);
std::string classification_prompt(const AnomalyVocabulary& vocab);
/// Trims whitespace, surrounding quotes and a trailing period.
std::string normalize_label(std::string_view answer);

struct PassOneResult {
  std::vector<LabeledBox> detections;  // composite coordinates, centers in the target half
  std::string raw_text;
  std::size_t parse_warnings = 0;
  std::size_t side_violations = 0;
};

struct Provenance {
  std::string pass1_label;
  std::string pass2_label;
  std::optional<BBox> crop;  // absent in single-pass mode
};

struct FinalResult {
  std::vector<LabeledBox> detections;
  std::vector<Provenance> provenance;  // parallel to detections
  std::size_t label_fallbacks = 0;
  std::size_t request_failures = 0;
};

PassOneResult run_pass1(const RasterImage& composite, int target_width, std::string_view sample_id,
                        const AnomalyVocabulary& vocab, const InferenceConfig& cfg,
                        client::ModelClient& client);

/// Relabels every pass-1 detection from a crop of `target`. Boxes and their
/// order are unchanged; failed requests and out-of-vocabulary answers keep
/// the pass-1 label.
FinalResult run_pass2(const RasterImage& target, const PassOneResult& pass1, std::string_view sample_id,
                      const AnomalyVocabulary& vocab, const InferenceConfig& cfg,
                      client::ModelClient& client);

FinalResult single_pass(const PassOneResult& pass1);

struct SampleInference {
  std::string sample_id;
  PassOneResult pass1;
  FinalResult final;
  std::optional<std::string> error;
  bool endpoint_failure = false;
};

/// Loads the sample's composite (pair.composite) and runs both passes.
/// Errors are captured in the result, not thrown.
SampleInference infer_sample(const SampleRecord& sample, const Manifest& manifest,
                             const AnomalyVocabulary& vocab, const InferenceConfig& cfg,
                             client::ModelClient& client);

Json to_json(const SampleInference& r);
/// The detections of one inference JSONL row.
std::vector<LabeledBox> detections_from_json(const Json& row);

struct InferenceRun {
  std::vector<SampleInference> results;  // manifest order
  bool aborted = false;                  // too many consecutive endpoint failures
};

inline constexpr std::size_t kAbortAfterConsecutiveFailures = 10;

InferenceRun infer_manifest(const Manifest& manifest, const AnomalyVocabulary& vocab,
                            const InferenceConfig& cfg, client::ModelClient& client);

}  // namespace pairscan::twopass
