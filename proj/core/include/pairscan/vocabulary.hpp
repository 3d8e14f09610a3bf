#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pairscan {

/// Ordered anomaly label set. Labels are compared trimmed and byte-exact.
class AnomalyVocabulary {
 public:
  AnomalyVocabulary(std::vector<std::string> labels, std::vector<std::string> state_driven);

  /// The fourteen power-plant anomaly categories; state-driven = open doors
  /// and water leakage.
  static AnomalyVocabulary defaults();
  /// JSON file {"labels": [...], "state_driven": [...]}.
  static AnomalyVocabulary load(const std::filesystem::path& path);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& state_driven() const noexcept { return state_driven_; }
  std::size_t size() const noexcept { return labels_.size(); }

  bool contains(std::string_view label) const;
  bool is_state_driven(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> state_driven_;
};

}  // namespace pairscan
