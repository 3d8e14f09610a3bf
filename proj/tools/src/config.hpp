#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pairscan/align/estimation.hpp"
#include "pairscan/align/features.hpp"
#include "pairscan/client/mock_oracle.hpp"
#include "pairscan/client/model_client.hpp"
#include "pairscan/eval/metrics.hpp"
#include "pairscan/synth/dataset.hpp"
#include "pairscan/twopass/inference.hpp"
#include "pairscan/vocabulary.hpp"

namespace pairscan::cli {

inline constexpr const char* kTokenEnv = "PAIRSCAN_AUTH_TOKEN";

struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::size_t workers = 4;
  std::filesystem::path output_dir;
  std::filesystem::path vocabulary;  // empty = built-in labels

  client::ClientConfig client;
  std::size_t candidates = 5;
  align::RansacConfig ransac;
  align::MatcherConfig matcher;
  synth::SynthConfig synth;
  twopass::InferenceConfig infer;

  double iou_threshold = 0.5;
  std::vector<double> min_sizes;  // extra thresholds besides 0
  bool exclude_state_driven = false;
  eval::SizeRule size_rule = eval::SizeRule::AnyBox;

  client::OracleNoise noise;
  std::string mock_host = "127.0.0.1";
  int mock_port = 0;

  AnomalyVocabulary load_vocabulary() const;
};

/// TOML run configuration; unknown keys are an error.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::string_view toml_text, std::string_view origin = "<config>");

}  // namespace pairscan::cli
