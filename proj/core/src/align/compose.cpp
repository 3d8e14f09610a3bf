#include "pairscan/align/compose.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pairscan/error.hpp"

namespace pairscan::align {

std::size_t select_reference(std::span<const CandidateMatch> candidates) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& m = candidates[i].match;
    if (!m || m->correspondences.size() < 4) continue;
    if (!best || m->mean_distance < candidates[*best].match->mean_distance) best = i;
  }
  if (!best) fail(ErrorKind::NoViableCandidate, "every candidate reference failed matching");
  return *best;
}

RasterImage warp_reference(const RasterImage& ref, const Homography& h, int out_width, int out_height) {
  require(out_width > 0 && out_height > 0, ErrorKind::InvalidArgument, "output size must be positive");
  const Homography inv = h.inverse();
  const Eigen::Matrix3d& m = inv.matrix();
  RasterImage out(out_width, out_height, ref.channels());
  std::array<double, 3> px{};
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      const double w = m(2, 0) * x + m(2, 1) * y + m(2, 2);
      if (std::abs(w) < 1e-12) continue;
      const double sx = (m(0, 0) * x + m(0, 1) * y + m(0, 2)) / w;
      const double sy = (m(1, 0) * x + m(1, 1) * y + m(1, 2)) / w;
      if (!sample_bilinear(ref, sx, sy, px)) continue;
      for (int c = 0; c < ref.channels(); ++c) {
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::floor(px[static_cast<std::size_t>(c)] + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

RasterImage compose_pair(const RasterImage& target, const RasterImage& warped_ref) {
  if (target.height() != warped_ref.height() || target.channels() != warped_ref.channels()) {
    fail(ErrorKind::ShapeMismatch,
         "target " + std::to_string(target.width()) + "x" + std::to_string(target.height()) + "x" +
             std::to_string(target.channels()) + " vs reference " +
             std::to_string(warped_ref.width()) + "x" + std::to_string(warped_ref.height()) + "x" +
             std::to_string(warped_ref.channels()));
  }
  const int w = target.width() + warped_ref.width();
  RasterImage out(w, target.height(), target.channels());
  const auto ch = static_cast<std::size_t>(target.channels());
  const std::size_t left = static_cast<std::size_t>(target.width()) * ch;
  const std::size_t right = static_cast<std::size_t>(warped_ref.width()) * ch;
  for (int y = 0; y < target.height(); ++y) {
    auto* dst = out.data().data() + static_cast<std::size_t>(y) * (left + right);
    const auto* a = target.data().data() + static_cast<std::size_t>(y) * left;
    const auto* b = warped_ref.data().data() + static_cast<std::size_t>(y) * right;
    std::copy(a, a + left, dst);
    std::copy(b, b + right, dst + left);
  }
  return out;
}

}  // namespace pairscan::align
