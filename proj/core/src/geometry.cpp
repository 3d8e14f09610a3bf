#include "pairscan/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "pairscan/error.hpp"

namespace pairscan {

double distance(Point2 a, Point2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

bool BBox::is_valid(double x1, double y1, double x2, double y2) noexcept {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2) &&
         x1 < x2 && y1 < y2;
}

BBox::BBox(double x1, double y1, double x2, double y2) : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!is_valid(x1, y1, x2, y2)) {
    fail(ErrorKind::InvalidBox, "box (" + std::to_string(x1) + "," + std::to_string(y1) + "," +
                                    std::to_string(x2) + "," + std::to_string(y2) +
                                    ") must be finite with x1<x2, y1<y2");
  }
}

double iou(const BBox& a, const BBox& b) noexcept {
  const double iw = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double ih = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

double geo_mean_size(const BBox& b) noexcept { return std::sqrt(b.width() * b.height()); }

std::string trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

LabeledBox::LabeledBox(BBox box, std::string_view label) : box_(box), label_(trim(label)) {
  require(!label_.empty(), ErrorKind::InvalidArgument, "label must be non-empty");
}

}  // namespace pairscan
