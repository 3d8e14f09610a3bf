#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pairscan/geometry.hpp"
#include "pairscan/homography.hpp"
#include "pairscan/jsonl.hpp"

namespace pairscan {

struct Telemetry {
  double latitude = 0.0;   // degrees
  double longitude = 0.0;  // degrees
  double altitude = 0.0;   // meters

  /// Throws InvalidArgument outside [-90, 90] x [-180, 180] or non-finite.
  static Telemetry make(double latitude, double longitude, double altitude);
};

/// Pair-construction output attached to a sample.
struct PairInfo {
  std::string composite;
  Homography homography = Homography::identity();
  double mean_distance = 0.0;
  std::string selected_ref;
};

struct SampleRecord {
  std::string sample_id;
  std::string target_image;
  std::string reference_image;
  std::optional<Telemetry> target_telemetry;
  std::vector<LabeledBox> ground_truth;
  std::optional<PairInfo> pair;
  /// Fields this library does not interpret, carried through unchanged.
  Json extra = Json::object();
};

Json to_json(const BBox& b);
BBox bbox_from_json(const Json& j);
Json to_json(const LabeledBox& b);
LabeledBox labeled_box_from_json(const Json& j);
Json to_json(const Telemetry& t);
Telemetry telemetry_from_json(const Json& j);
Json to_json(const SampleRecord& r);
/// Throws Parse / InvalidBox / InvalidArgument for malformed records.
SampleRecord sample_record_from_json(const Json& j);

/// Throws InvalidBox when a ground-truth box extends past (width, height).
void validate_within_bounds(const SampleRecord& r, int width, int height);

struct ManifestError {
  std::size_t line = 0;
  std::string sample_id;
  std::string message;
};

/// A JSONL manifest with per-record rejections. Relative paths inside the
/// manifest resolve against its directory.
struct Manifest {
  std::vector<SampleRecord> records;
  std::vector<ManifestError> errors;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& path) const;
};

Manifest load_manifest(const std::filesystem::path& path);
Manifest manifest_from_rows(const std::vector<Json>& rows, std::filesystem::path base_dir);

}  // namespace pairscan
