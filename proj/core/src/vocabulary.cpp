#include "pairscan/vocabulary.hpp"

#include <algorithm>
#include <set>

#include "pairscan/error.hpp"
#include "pairscan/geometry.hpp"
#include "pairscan/jsonl.hpp"

namespace pairscan {

AnomalyVocabulary::AnomalyVocabulary(std::vector<std::string> labels,
                                     std::vector<std::string> state_driven) {
  std::set<std::string> seen;
  for (const auto& raw : labels) {
    auto label = trim(raw);
    require(!label.empty(), ErrorKind::InvalidArgument, "vocabulary label must be non-empty");
    require(seen.insert(label).second, ErrorKind::InvalidArgument, "duplicate vocabulary label: " + label);
    labels_.push_back(std::move(label));
  }
  require(!labels_.empty(), ErrorKind::InvalidArgument, "vocabulary must not be empty");
  for (const auto& raw : state_driven) {
    auto label = trim(raw);
    require(seen.count(label) == 1, ErrorKind::InvalidArgument,
            "state-driven label not in vocabulary: " + label);
    state_driven_.push_back(std::move(label));
  }
}

AnomalyVocabulary AnomalyVocabulary::defaults() {
  return AnomalyVocabulary(
      {"plastic bottles", "empty cans", "tools", "garbage bags", "traffic cones", "gloves",
       "helmets", "bird nests", "umbrellas", "towels", "protective tape", "people", "open doors",
       "water leakage"},
      {"open doors", "water leakage"});
}

AnomalyVocabulary AnomalyVocabulary::load(const std::filesystem::path& path) {
  const Json doc = Json::parse(read_text_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("labels")) {
    fail(ErrorKind::Parse, path.string() + ": expected {\"labels\": [...], \"state_driven\": [...]}");
  }
  try {
    return AnomalyVocabulary(doc.at("labels").get<std::vector<std::string>>(),
                             doc.value("state_driven", std::vector<std::string>{}));
  } catch (const Json::exception& e) {
    fail(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

bool AnomalyVocabulary::contains(std::string_view label) const {
  const auto t = trim(label);
  return std::find(labels_.begin(), labels_.end(), t) != labels_.end();
}

bool AnomalyVocabulary::is_state_driven(std::string_view label) const {
  const auto t = trim(label);
  return std::find(state_driven_.begin(), state_driven_.end(), t) != state_driven_.end();
}

}  // namespace pairscan
