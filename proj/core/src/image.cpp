#include "pairscan/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pairscan/error.hpp"

namespace pairscan {

namespace {

void check_shape(int width, int height, int channels) {
  require(width > 0 && height > 0, ErrorKind::InvalidArgument, "image dimensions must be positive");
  require(channels == 1 || channels == 3, ErrorKind::InvalidArgument, "channels must be 1 or 3");
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  check_shape(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_shape(width, height, channels);
  require(data_.size() == static_cast<std::size_t>(width) * height * channels,
          ErrorKind::InvalidArgument, "pixel buffer length does not match width*height*channels");
}

RasterImage RasterImage::crop(int x, int y, int w, int h) const {
  require(x >= 0 && y >= 0 && w > 0 && h > 0 && x + w <= width_ && y + h <= height_,
          ErrorKind::InvalidArgument, "crop rectangle outside image");
  RasterImage out(w, h, channels_);
  const std::size_t row = static_cast<std::size_t>(w) * channels_;
  for (int r = 0; r < h; ++r) {
    const auto* src = data_.data() + index(x, y + r, 0);
    std::copy(src, src + row, out.data_.data() + static_cast<std::size_t>(r) * row);
  }
  return out;
}

RasterImage RasterImage::to_gray() const {
  if (channels_ == 1) return *this;
  RasterImage out(width_, height_, 1);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      // ITU-R BT.601 luma, integer form.
      const int v = 299 * at(x, y, 0) + 587 * at(x, y, 1) + 114 * at(x, y, 2);
      out.at(x, y) = static_cast<std::uint8_t>((v + 500) / 1000);
    }
  }
  return out;
}

bool sample_bilinear(const RasterImage& img, double x, double y, std::span<double> out) noexcept {
  constexpr double eps = 1e-6;
  const int w = img.width();
  const int h = img.height();
  if (!(x >= -eps && y >= -eps && x <= (w - 1) + eps && y <= (h - 1) + eps)) return false;
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = std::min(static_cast<int>(std::floor(x)), w - 1);
  const int y0 = std::min(static_cast<int>(std::floor(y)), h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  for (int c = 0; c < img.channels(); ++c) {
    const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
    const double bottom = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
    out[static_cast<std::size_t>(c)] = top * (1.0 - fy) + bottom * fy;
  }
  return true;
}

CropResult crop_with_margin(const RasterImage& img, const BBox& box, double margin_frac) {
  require(margin_frac >= 0.0 && std::isfinite(margin_frac), ErrorKind::InvalidArgument,
          "margin_frac must be finite and >= 0");
  const double mx = margin_frac * box.width();
  const double my = margin_frac * box.height();
  const double fx1 = std::max(0.0, std::floor(box.x1() - mx));
  const double fy1 = std::max(0.0, std::floor(box.y1() - my));
  const double fx2 = std::min(static_cast<double>(img.width()), std::ceil(box.x2() + mx));
  const double fy2 = std::min(static_cast<double>(img.height()), std::ceil(box.y2() + my));
  if (!(fx1 < fx2 && fy1 < fy2)) {
    fail(ErrorKind::EmptyIntersection, "box lies outside the image");
  }
  const int x1 = static_cast<int>(fx1);
  const int y1 = static_cast<int>(fy1);
  const int x2 = static_cast<int>(fx2);
  const int y2 = static_cast<int>(fy2);
  return CropResult{img.crop(x1, y1, x2 - x1, y2 - y1), x1, y1};
}

double psnr(const RasterImage& a, const RasterImage& b, int x0, int y0, int x1, int y1) {
  require(a.width() == b.width() && a.height() == b.height() && a.channels() == b.channels(),
          ErrorKind::ShapeMismatch, "psnr needs equally shaped images");
  require(x0 >= 0 && y0 >= 0 && x1 <= a.width() && y1 <= a.height() && x0 < x1 && y0 < y1,
          ErrorKind::InvalidArgument, "psnr region outside image");
  double sse = 0.0;
  std::size_t n = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      for (int c = 0; c < a.channels(); ++c) {
        const double d = static_cast<double>(a.at(x, y, c)) - b.at(x, y, c);
        sse += d * d;
        ++n;
      }
    }
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(n);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace pairscan
