#include "pairscan/align/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "pairscan/error.hpp"
#include "pairscan/random.hpp"

namespace pairscan::align {

namespace {

constexpr double kCollinearTolerance = 1e-6;
constexpr double kRankTolerance = 1e-9;

// Similarity taking the points to centroid origin with mean radius sqrt(2).
Eigen::Matrix3d normalizing_transform(std::span<const Point2> pts) {
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double mean_r = 0.0;
  for (const auto& p : pts) mean_r += std::hypot(p.x - cx, p.y - cy);
  mean_r /= static_cast<double>(pts.size());
  if (!(mean_r > 0.0)) fail(ErrorKind::DegenerateConfiguration, "all points coincide");
  const double s = std::numbers::sqrt2 / mean_r;
  Eigen::Matrix3d t;
  t << s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0;
  return t;
}

double triangle_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double extent_area(std::span<const Point2> pts) {
  double minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
  for (const auto& p : pts) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  return (maxx - minx) * (maxy - miny);
}

// Minimal sets: no three points may be collinear. Larger sets: reject only the
// case where every point lies on one line; the rank test catches the rest.
void check_configuration(std::span<const Point2> pts, const char* which) {
  const double area = extent_area(pts);
  if (!(area > 0.0)) {
    fail(ErrorKind::DegenerateConfiguration, std::string(which) + " points are collinear");
  }
  const double tol = kCollinearTolerance * area;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] == pts[j] && pts.size() == 4) {
        fail(ErrorKind::DegenerateConfiguration, std::string(which) + " points coincide");
      }
    }
  }
  if (pts.size() == 4) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        for (std::size_t k = j + 1; k < 4; ++k) {
          if (triangle_area(pts[i], pts[j], pts[k]) < tol) {
            fail(ErrorKind::DegenerateConfiguration,
                 std::string("three ") + which + " points are collinear");
          }
        }
      }
    }
    return;
  }
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : pts) mean += Eigen::Vector2d(p.x, p.y);
  mean /= static_cast<double>(pts.size());
  for (const auto& p : pts) {
    const Eigen::Vector2d d = Eigen::Vector2d(p.x, p.y) - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  if (eig.eigenvalues()(0) <= kCollinearTolerance * kCollinearTolerance * eig.eigenvalues()(1)) {
    fail(ErrorKind::DegenerateConfiguration, std::string("all ") + which + " points are collinear");
  }
}

}  // namespace

void RansacConfig::validate() const {
  require(max_iterations >= 1, ErrorKind::InvalidArgument, "ransac max_iterations must be >= 1");
  require(inlier_threshold > 0.0 && std::isfinite(inlier_threshold), ErrorKind::InvalidArgument,
          "ransac inlier_threshold must be > 0");
  require(min_inliers >= 4, ErrorKind::InvalidArgument, "ransac min_inliers must be >= 4");
  require(confidence > 0.0 && confidence < 1.0, ErrorKind::InvalidArgument,
          "ransac confidence must be in (0, 1)");
}

Homography estimate_homography_dlt(std::span<const Correspondence> c) {
  require(c.size() >= 4, ErrorKind::InvalidArgument,
          "homography needs at least 4 correspondences, got " + std::to_string(c.size()));
  std::vector<Point2> ref;
  std::vector<Point2> tgt;
  ref.reserve(c.size());
  tgt.reserve(c.size());
  for (const auto& m : c) {
    ref.push_back(m.p_ref);
    tgt.push_back(m.p_tgt);
  }
  check_configuration(ref, "reference");
  check_configuration(tgt, "target");

  const Eigen::Matrix3d tr = normalizing_transform(ref);
  const Eigen::Matrix3d tt = normalizing_transform(tgt);

  const Eigen::Index rows = std::max<Eigen::Index>(9, 2 * static_cast<Eigen::Index>(c.size()));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, 9);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Eigen::Vector3d p = tr * Eigen::Vector3d(ref[i].x, ref[i].y, 1.0);
    const Eigen::Vector3d q = tt * Eigen::Vector3d(tgt[i].x, tgt[i].y, 1.0);
    const double x = p(0), y = p(1), u = q(0), v = q(1);
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.row(r) << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
    a.row(r + 1) << x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, -u;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(7) - s(8) > kRankTolerance * s(0))) {
    fail(ErrorKind::RankDeficient, "DLT system has a degenerate null space");
  }
  const Eigen::VectorXd hv = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << hv(0), hv(1), hv(2), hv(3), hv(4), hv(5), hv(6), hv(7), hv(8);
  return Homography(tt.inverse() * hn * tr);
}

double symmetric_transfer_error(const Homography& h, const Homography& h_inv, const Correspondence& c) {
  try {
    const double fwd = distance(h.apply(c.p_ref), c.p_tgt);
    const double bwd = distance(h_inv.apply(c.p_tgt), c.p_ref);
    return 0.5 * (fwd + bwd);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

double rms_symmetric_transfer_error(const Homography& h, std::span<const Correspondence> c) {
  if (c.empty()) return 0.0;
  const Homography inv = h.inverse();
  double sum = 0.0;
  for (const auto& m : c) {
    const double e = symmetric_transfer_error(h, inv, m);
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(c.size()));
}

namespace {

struct Consensus {
  std::vector<std::size_t> inliers;
  double error_sum = 0.0;
};

Consensus consensus(const Homography& h, std::span<const Correspondence> c, double threshold) {
  Consensus out;
  Homography inv = Homography::identity();
  try {
    inv = h.inverse();
  } catch (const Error&) {
    return out;
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double e = symmetric_transfer_error(h, inv, c[i]);
    if (e <= threshold) {
      out.inliers.push_back(i);
      out.error_sum += e;
    }
  }
  return out;
}

std::vector<Correspondence> gather(std::span<const Correspondence> c, const std::vector<std::size_t>& idx) {
  std::vector<Correspondence> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(c[i]);
  return out;
}

}  // namespace

RansacResult estimate_homography_ransac(std::span<const Correspondence> c, const RansacConfig& cfg) {
  cfg.validate();
  require(c.size() >= 4, ErrorKind::InvalidArgument,
          "RANSAC needs at least 4 correspondences, got " + std::to_string(c.size()));

  Rng rng(cfg.seed);
  Consensus best;
  std::optional<Homography> best_h;
  int needed = cfg.max_iterations;
  int it = 0;
  std::array<Correspondence, 4> sample;
  for (; it < needed; ++it) {
    const auto idx = rng.sample_indices(c.size(), 4);
    for (std::size_t k = 0; k < 4; ++k) sample[k] = c[idx[k]];
    std::optional<Homography> h;
    try {
      h = estimate_homography_dlt(sample);
    } catch (const Error&) {
      continue;  // degenerate minimal sample
    }
    auto cs = consensus(*h, c, cfg.inlier_threshold);
    const bool better = cs.inliers.size() > best.inliers.size() ||
                        (cs.inliers.size() == best.inliers.size() && !cs.inliers.empty() &&
                         cs.error_sum < best.error_sum);
    if (!better) continue;
    best = std::move(cs);
    best_h = h;
    const double w = static_cast<double>(best.inliers.size()) / static_cast<double>(c.size());
    const double p_good = std::pow(w, 4.0);
    if (p_good >= 1.0) {
      needed = it + 1;
    } else if (p_good > 0.0) {
      const double n = std::log(1.0 - cfg.confidence) / std::log(1.0 - p_good);
      if (n < static_cast<double>(needed)) needed = std::max(it + 1, static_cast<int>(std::ceil(n)));
    }
  }
  if (!best_h || best.inliers.size() < 4) {
    fail(ErrorKind::ConsensusFailure, "no non-degenerate sample reached 4 inliers");
  }

  Homography refit = estimate_homography_dlt(gather(c, best.inliers));
  auto final_set = consensus(refit, c, cfg.inlier_threshold);
  if (final_set.inliers != best.inliers && final_set.inliers.size() >= 4) {
    refit = estimate_homography_dlt(gather(c, final_set.inliers));
    final_set = consensus(refit, c, cfg.inlier_threshold);
  }
  if (final_set.inliers.size() < cfg.min_inliers) {
    fail(ErrorKind::ConsensusFailure, std::to_string(final_set.inliers.size()) +
                                          " inliers after refit, need " +
                                          std::to_string(cfg.min_inliers));
  }
  return RansacResult{refit, std::move(final_set.inliers), it};
}

}  // namespace pairscan::align
