#pragma once

#include <string>

namespace pairscan {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(Point2 a, Point2 b) noexcept;

/// Axis-aligned pixel rectangle in corner-pair form. Coordinates are
/// continuous, origin top-left, y downward; x1 < x2 and y1 < y2.
class BBox {
 public:
  /// Throws InvalidBox on non-finite or non-positive-area input.
  BBox(double x1, double y1, double x2, double y2);

  double x1() const noexcept { return x1_; }
  double y1() const noexcept { return y1_; }
  double x2() const noexcept { return x2_; }
  double y2() const noexcept { return y2_; }
  double width() const noexcept { return x2_ - x1_; }
  double height() const noexcept { return y2_ - y1_; }
  double area() const noexcept { return width() * height(); }
  Point2 center() const noexcept { return {(x1_ + x2_) / 2.0, (y1_ + y2_) / 2.0}; }

  static bool is_valid(double x1, double y1, double x2, double y2) noexcept;

  friend bool operator==(const BBox&, const BBox&) = default;

 private:
  double x1_, y1_, x2_, y2_;
};

/// Intersection over union; 0 for disjoint or edge-touching boxes.
double iou(const BBox& a, const BBox& b) noexcept;

/// sqrt(width * height), the size statistic used for quartiles and thresholds.
double geo_mean_size(const BBox& b) noexcept;

std::string trim(std::string_view s);

class LabeledBox {
 public:
  /// The label is stored trimmed; an empty label throws InvalidArgument.
  LabeledBox(BBox box, std::string_view label);

  const BBox& bbox() const noexcept { return box_; }
  const std::string& label() const noexcept { return label_; }

  friend bool operator==(const LabeledBox&, const LabeledBox&) = default;

 private:
  BBox box_;
  std::string label_;
};

}  // namespace pairscan
