#include "pairscan/homography.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "pairscan/error.hpp"

namespace pairscan {

double condition_number(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
  const auto& s = svd.singularValues();
  if (s(2) <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(2);
}

Eigen::Matrix3d Homography::normalize(const Eigen::Matrix3d& m) {
  const double norm = m.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    fail(ErrorKind::SingularHomography, "matrix is zero or non-finite");
  }
  Eigen::Matrix3d h = m / norm;
  double pivot = h(2, 2);
  if (pivot == 0.0) {
    for (int i = 0; i < 9 && pivot == 0.0; ++i) pivot = h(i / 3, i % 3);
  }
  if (pivot < 0.0) h = -h;
  return h;
}

Homography::Homography(const Eigen::Matrix3d& m, double condition_cap) : h_(normalize(m)) {
  const double cond = pairscan::condition_number(h_);
  if (!(cond <= condition_cap)) {
    fail(ErrorKind::SingularHomography,
         "condition number " + std::to_string(cond) + " exceeds cap " + std::to_string(condition_cap));
  }
}

Homography Homography::identity() { return Homography(Eigen::Matrix3d::Identity()); }

Homography Homography::translation(double tx, double ty) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 2) = tx;
  m(1, 2) = ty;
  return Homography(m);
}

Homography Homography::from_row_major(const std::array<double, 9>& v) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = v[static_cast<std::size_t>(i)];
  return Homography(m);
}

std::array<double, 9> Homography::row_major() const {
  std::array<double, 9> out{};
  for (int i = 0; i < 9; ++i) out[static_cast<std::size_t>(i)] = h_(i / 3, i % 3);
  return out;
}

Point2 Homography::apply(Point2 p) const {
  const double xp = h_(0, 0) * p.x + h_(0, 1) * p.y + h_(0, 2);
  const double yp = h_(1, 0) * p.x + h_(1, 1) * p.y + h_(1, 2);
  const double wp = h_(2, 0) * p.x + h_(2, 1) * p.y + h_(2, 2);
  if (std::abs(wp) < 1e-12) {
    fail(ErrorKind::DegeneratePoint, "point maps to the line at infinity");
  }
  return {xp / wp, yp / wp};
}

Homography Homography::inverse() const { return Homography(h_.inverse()); }

double Homography::condition_number() const { return pairscan::condition_number(h_); }

std::optional<Eigen::Matrix3d> Homography::unit_h33() const {
  if (std::abs(h_(2, 2)) <= 1e-9) return std::nullopt;
  return Eigen::Matrix3d(h_ / h_(2, 2));
}

double Homography::distance_to(const Homography& other) const {
  const Eigen::Matrix3d& o = other.matrix();
  return std::min((h_ - o).norm(), (h_ + o).norm());
}

}  // namespace pairscan
