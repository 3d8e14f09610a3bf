#include "pairscan/align/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pairscan/error.hpp"

namespace pairscan::align {

namespace {
constexpr double kEarthRadiusM = 6371008.8;
constexpr double kDegToRad = std::numbers::pi / 180.0;
}  // namespace

double local_distance_m(const Telemetry& a, const Telemetry& b) {
  double dlon = b.longitude - a.longitude;
  if (dlon > 180.0) dlon -= 360.0;
  if (dlon < -180.0) dlon += 360.0;
  const double east = kEarthRadiusM * dlon * kDegToRad * std::cos(a.latitude * kDegToRad);
  const double north = kEarthRadiusM * (b.latitude - a.latitude) * kDegToRad;
  const double up = b.altitude - a.altitude;
  return std::sqrt(east * east + north * north + up * up);
}

std::vector<RankedCandidate> retrieve_candidates(const std::optional<Telemetry>& target,
                                                 std::span<const PoolEntry> pool, std::size_t k) {
  if (!target) fail(ErrorKind::MissingTelemetry, "target has no telemetry");
  require(!pool.empty(), ErrorKind::InvalidArgument, "reference pool is empty");
  require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
  std::vector<RankedCandidate> ranked;
  ranked.reserve(pool.size());
  for (const auto& entry : pool) {
    ranked.push_back({entry.ref_id, local_distance_m(*target, entry.telemetry)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.distance_m < b.distance_m; });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::vector<PoolEntry> load_reference_pool(const std::filesystem::path& path) {
  std::vector<PoolEntry> pool;
  std::size_t line = 0;
  for (const auto& row : read_jsonl(path)) {
    ++line;
    try {
      PoolEntry e;
      e.ref_id = row.at("ref_id").get<std::string>();
      e.image = row.at("image").get<std::string>();
      e.telemetry = telemetry_from_json(row.at("telemetry"));
      const auto p = std::filesystem::path(e.image);
      if (p.is_relative()) e.image = (path.parent_path() / p).string();
      pool.push_back(std::move(e));
    } catch (const Json::exception& ex) {
      fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": " + ex.what());
    }
  }
  return pool;
}

}  // namespace pairscan::align
