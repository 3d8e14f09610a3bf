#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "pairscan/geometry.hpp"
#include "pairscan/image.hpp"

namespace pairscan::align {

struct Correspondence {
  Point2 p_ref;
  Point2 p_tgt;
  double score = 0.0;  // higher is better
};

struct MatchResult {
  std::vector<Correspondence> correspondences;
  double mean_distance = 0.0;  // mean |p_ref - p_tgt| in pixels
};

/// Mean image-plane displacement; 0 for an empty list.
double mean_displacement(std::span<const Correspondence> c);
MatchResult make_match_result(std::vector<Correspondence> c);

struct MatcherConfig {
  int max_corners = 1000;
  int nms_radius = 2;
  double harris_k = 0.04;
  double relative_response = 0.01;  // keep corners above this fraction of the peak
  double ratio = 0.8;               // best / second-best Hamming distance
};

/// Harris corners, 256-bit binary patch descriptors, mutual nearest neighbours
/// filtered by the distance-ratio test. Deterministic. Throws
/// InsufficientFeatures when fewer than 4 correspondences survive and
/// InvalidArgument for images smaller than 64 px on a side.
MatchResult match_features(const RasterImage& ref, const RasterImage& tgt,
                           const MatcherConfig& cfg = {});

struct Keypoint {
  int x = 0;
  int y = 0;
  double response = 0.0;
};

std::vector<Keypoint> detect_corners(const RasterImage& gray, const MatcherConfig& cfg = {});

/// Externally computed matches, one JSON object per line:
/// {"ref": [x, y], "tgt": [x, y], "score": s}.
std::vector<Correspondence> load_correspondences(const std::filesystem::path& path);
void save_correspondences(const std::filesystem::path& path, std::span<const Correspondence> c);

}  // namespace pairscan::align
