#pragma once

#include <optional>
#include <span>
#include <string>

#include "pairscan/align/features.hpp"
#include "pairscan/homography.hpp"
#include "pairscan/image.hpp"

namespace pairscan::align {

struct CandidateMatch {
  std::string ref_id;
  std::optional<MatchResult> match;  // empty when matching failed
};

/// Index of the candidate with the smallest mean_distance among those with
/// at least 4 correspondences; ties go to the earlier candidate. Throws
/// NoViableCandidate when none qualifies.
std::size_t select_reference(std::span<const CandidateMatch> candidates);

/// Resamples `ref` into the target frame: every output pixel p takes the
/// bilinear sample at h^-1 p; pixels mapping outside the source are 0.
/// Throws SingularHomography when h is not invertible within the cap.
RasterImage warp_reference(const RasterImage& ref, const Homography& h, int out_width, int out_height);

/// target | reference side by side. Throws ShapeMismatch on differing heights
/// or channel counts.
RasterImage compose_pair(const RasterImage& target, const RasterImage& warped_ref);

}  // namespace pairscan::align
