#include "pairscan/records.hpp"

#include <cmath>
#include <set>

#include "pairscan/error.hpp"

namespace pairscan {

Telemetry Telemetry::make(double latitude, double longitude, double altitude) {
  require(std::isfinite(latitude) && std::isfinite(longitude) && std::isfinite(altitude),
          ErrorKind::InvalidArgument, "telemetry must be finite");
  require(latitude >= -90.0 && latitude <= 90.0, ErrorKind::InvalidArgument,
          "latitude out of [-90, 90]");
  require(longitude >= -180.0 && longitude <= 180.0, ErrorKind::InvalidArgument,
          "longitude out of [-180, 180]");
  return Telemetry{latitude, longitude, altitude};
}

Json to_json(const BBox& b) { return Json::array({b.x1(), b.y1(), b.x2(), b.y2()}); }

BBox bbox_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) fail(ErrorKind::Parse, "bbox must be [x1, y1, x2, y2]");
  for (const auto& v : j) {
    if (!v.is_number()) fail(ErrorKind::Parse, "bbox coordinates must be numbers");
  }
  return BBox(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

Json to_json(const LabeledBox& b) { return Json{{"bbox", to_json(b.bbox())}, {"label", b.label()}}; }

LabeledBox labeled_box_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("bbox") || !j.contains("label") || !j["label"].is_string()) {
    fail(ErrorKind::Parse, "labeled box must be {\"bbox\": [...], \"label\": \"...\"}");
  }
  return LabeledBox(bbox_from_json(j["bbox"]), j["label"].get<std::string>());
}

Json to_json(const Telemetry& t) {
  return Json{{"latitude", t.latitude}, {"longitude", t.longitude}, {"altitude", t.altitude}};
}

Telemetry telemetry_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::Parse, "telemetry must be an object");
  try {
    return Telemetry::make(j.at("latitude").get<double>(), j.at("longitude").get<double>(),
                           j.at("altitude").get<double>());
  } catch (const Json::exception& e) {
    fail(ErrorKind::Parse, std::string("telemetry: ") + e.what());
  }
}

Json to_json(const SampleRecord& r) {
  Json j = r.extra.is_object() ? r.extra : Json::object();
  j["sample_id"] = r.sample_id;
  j["target_image"] = r.target_image;
  j["reference_image"] = r.reference_image;
  if (r.target_telemetry) j["target_telemetry"] = to_json(*r.target_telemetry);
  Json gt = Json::array();
  for (const auto& b : r.ground_truth) gt.push_back(to_json(b));
  j["ground_truth"] = std::move(gt);
  if (r.pair) {
    j["composite"] = r.pair->composite;
    j["homography"] = r.pair->homography.row_major();
    j["mean_distance"] = r.pair->mean_distance;
    j["selected_ref"] = r.pair->selected_ref;
  }
  return j;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "sample_id", "target_image", "reference_image", "target_telemetry", "ground_truth",
      "composite", "homography",   "mean_distance",   "selected_ref"};
  return keys;
}

std::string string_field(const Json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) fail(ErrorKind::Parse, std::string("missing field \"") + key + "\"");
    return {};
  }
  if (!j[key].is_string()) fail(ErrorKind::Parse, std::string("field \"") + key + "\" must be a string");
  return j[key].get<std::string>();
}

}  // namespace

SampleRecord sample_record_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::Parse, "record must be a JSON object");
  SampleRecord r;
  r.sample_id = trim(string_field(j, "sample_id", true));
  require(!r.sample_id.empty(), ErrorKind::Parse, "sample_id must be non-empty");
  r.target_image = string_field(j, "target_image", false);
  r.reference_image = string_field(j, "reference_image", false);
  if (j.contains("target_telemetry") && !j["target_telemetry"].is_null()) {
    r.target_telemetry = telemetry_from_json(j["target_telemetry"]);
  }
  if (j.contains("ground_truth")) {
    if (!j["ground_truth"].is_array()) fail(ErrorKind::Parse, "ground_truth must be an array");
    for (const auto& b : j["ground_truth"]) r.ground_truth.push_back(labeled_box_from_json(b));
  }
  if (j.contains("composite")) {
    PairInfo info;
    info.composite = string_field(j, "composite", true);
    if (j.contains("homography")) {
      const auto& h = j["homography"];
      if (!h.is_array() || h.size() != 9) fail(ErrorKind::Parse, "homography must hold 9 numbers");
      info.homography = Homography::from_row_major(h.get<std::array<double, 9>>());
    }
    info.mean_distance = j.value("mean_distance", 0.0);
    info.selected_ref = string_field(j, "selected_ref", false);
    r.pair = std::move(info);
  }
  for (const auto& [key, value] : j.items()) {
    if (!known_keys().count(key)) r.extra[key] = value;
  }
  return r;
}

void validate_within_bounds(const SampleRecord& r, int width, int height) {
  for (const auto& b : r.ground_truth) {
    const auto& box = b.bbox();
    if (box.x1() < 0 || box.y1() < 0 || box.x2() > width || box.y2() > height) {
      fail(ErrorKind::InvalidBox, "sample " + r.sample_id + ": ground-truth box outside " +
                                      std::to_string(width) + "x" + std::to_string(height) +
                                      " target image");
    }
  }
}

std::filesystem::path Manifest::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

Manifest manifest_from_rows(const std::vector<Json>& rows, std::filesystem::path base_dir) {
  Manifest m;
  m.base_dir = std::move(base_dir);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto line = i + 1;
    std::string id;
    if (rows[i].is_object() && rows[i].contains("sample_id") && rows[i]["sample_id"].is_string()) {
      id = rows[i]["sample_id"].get<std::string>();
    }
    try {
      auto rec = sample_record_from_json(rows[i]);
      if (!ids.insert(rec.sample_id).second) {
        m.errors.push_back({line, rec.sample_id, "duplicate sample_id"});
        continue;
      }
      m.records.push_back(std::move(rec));
    } catch (const Error& e) {
      m.errors.push_back({line, id, e.what()});
    }
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_rows(read_jsonl(path), path.parent_path());
}

}  // namespace pairscan
