#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairscan/records.hpp"

namespace pairscan::align {

inline constexpr std::size_t kDefaultCandidateCount = 5;

struct PoolEntry {
  std::string ref_id;
  std::string image;
  Telemetry telemetry;
};

struct RankedCandidate {
  std::string ref_id;
  double distance_m = 0.0;
};

/// 3D distance in meters: latitude/longitude projected equirectangularly about
/// a's latitude, altitude difference used directly.
double local_distance_m(const Telemetry& a, const Telemetry& b);

/// The k pool entries closest to `target`, ascending; stable for equal
/// distances. Throws MissingTelemetry when target is empty.
std::vector<RankedCandidate> retrieve_candidates(const std::optional<Telemetry>& target,
                                                 std::span<const PoolEntry> pool, std::size_t k);

/// Reference pool JSONL: {"ref_id", "image", "telemetry": {...}}.
std::vector<PoolEntry> load_reference_pool(const std::filesystem::path& path);

}  // namespace pairscan::align
