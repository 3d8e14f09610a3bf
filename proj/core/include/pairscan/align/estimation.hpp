#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairscan/align/features.hpp"
#include "pairscan/homography.hpp"

namespace pairscan::align {

struct RansacConfig {
  int max_iterations = 2000;
  double inlier_threshold = 3.0;  // pixels, symmetric transfer error
  std::size_t min_inliers = 12;
  std::uint64_t seed = 0;
  /// Adaptive stopping: quit once an all-inlier sample has been drawn with
  /// this probability under the current inlier ratio.
  double confidence = 0.999;

  void validate() const;
};

struct RansacResult {
  Homography homography;
  std::vector<std::size_t> inliers;  // ascending indices into the input
  int iterations = 0;
};

/// Normalized DLT (Hartley): each point set is moved to its centroid and
/// scaled to mean radius sqrt(2), the 2n x 9 system is solved by its smallest
/// right singular vector, then denormalized.
///
/// Throws InvalidArgument for fewer than 4 correspondences,
/// DegenerateConfiguration for coincident or collinear points, and
/// RankDeficient when the two smallest singular values are within 1e-9 of
/// each other relative to the largest.
Homography estimate_homography_dlt(std::span<const Correspondence> c);

/// Seeded RANSAC over minimal 4-point samples with a DLT refit on the best
/// consensus set. Throws ConsensusFailure when fewer than min_inliers remain.
RansacResult estimate_homography_ransac(std::span<const Correspondence> c, const RansacConfig& cfg);

/// 0.5 * (|H p_ref - p_tgt| + |H^-1 p_tgt - p_ref|); +inf if either side maps
/// to infinity.
double symmetric_transfer_error(const Homography& h, const Homography& h_inv,
                                const Correspondence& c);

double rms_symmetric_transfer_error(const Homography& h, std::span<const Correspondence> c);

}  // namespace pairscan::align
