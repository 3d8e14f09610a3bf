#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>

#include "pairscan/geometry.hpp"

namespace pairscan {

inline constexpr double kHomographyConditionCap = 1e8;

/// 3x3 projective transform mapping reference-image points onto the target
/// frame. Stored Frobenius-normalized with h(2,2) >= 0 (when h(2,2) == 0 the
/// first non-zero entry in row-major order is made positive).
class Homography {
 public:
  /// Normalizes m. Throws SingularHomography when m is non-finite, zero, or
  /// its condition number exceeds condition_cap.
  explicit Homography(const Eigen::Matrix3d& m, double condition_cap = kHomographyConditionCap);

  static Homography identity();
  static Homography translation(double tx, double ty);
  static Homography from_row_major(const std::array<double, 9>& v);

  const Eigen::Matrix3d& matrix() const noexcept { return h_; }
  std::array<double, 9> row_major() const;

  /// Throws DegeneratePoint when |w'| < 1e-12.
  Point2 apply(Point2 p) const;
  Homography inverse() const;
  double condition_number() const;

  /// The same transform scaled so h33 = 1; empty when |h33| <= 1e-9.
  std::optional<Eigen::Matrix3d> unit_h33() const;

  /// Frobenius distance after aligning the sign of `other` to this.
  double distance_to(const Homography& other) const;

  static Eigen::Matrix3d normalize(const Eigen::Matrix3d& m);

 private:
  Eigen::Matrix3d h_;
};

double condition_number(const Eigen::Matrix3d& m);

}  // namespace pairscan
