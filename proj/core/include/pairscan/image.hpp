#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairscan/geometry.hpp"

namespace pairscan {

/// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
  RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::uint8_t at(int x, int y, int c = 0) const noexcept {
    return data_[index(x, y, c)];
  }
  std::uint8_t& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  /// Integer-grid sub-image; the rectangle must lie inside the image.
  RasterImage crop(int x, int y, int w, int h) const;
  RasterImage to_gray() const;

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Bilinear sample at continuous pixel-center coordinates. Returns false when
/// (x, y) falls outside [0, w-1] x [0, h-1] (with a 1e-6 px tolerance).
bool sample_bilinear(const RasterImage& img, double x, double y, std::span<double> out) noexcept;

struct CropResult {
  RasterImage image;
  int offset_x = 0;
  int offset_y = 0;

  BBox region() const {
    return BBox(offset_x, offset_y, offset_x + image.width(), offset_y + image.height());
  }
};

/// Crops `box` grown by margin_frac of its own width/height on each side,
/// snapped outward to the pixel grid and clamped to the image. Throws
/// EmptyIntersection when nothing of the box is inside the image.
CropResult crop_with_margin(const RasterImage& img, const BBox& box, double margin_frac);

/// Peak signal-to-noise ratio over the rectangle [x0, x1) x [y0, y1).
double psnr(const RasterImage& a, const RasterImage& b, int x0, int y0, int x1, int y1);

}  // namespace pairscan
