#include "pairscan/synth/paste.hpp"

#include <algorithm>
#include <cmath>

#include "pairscan/error.hpp"

namespace pairscan::synth {

MaskedObject MaskedObject::make(RasterImage source, RasterImage mask, std::string label) {
  require(!source.empty() && !mask.empty(), ErrorKind::InvalidArgument, "object images must be non-empty");
  require(mask.channels() == 1, ErrorKind::InvalidArgument, "mask must be single-channel");
  require(mask.width() == source.width() && mask.height() == source.height(),
          ErrorKind::InvalidArgument, "mask and source dimensions differ");
  label = trim(label);
  require(!label.empty(), ErrorKind::InvalidArgument, "object label must be non-empty");
  return MaskedObject{std::move(source), std::move(mask), std::move(label)};
}

std::optional<std::array<int, 4>> MaskedObject::foreground_rect() const {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y) == 0) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return std::nullopt;
  return std::array<int, 4>{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

std::array<int, 2> scaled_size(const MaskedObject& obj, double scale) {
  require(scale > 0.0 && std::isfinite(scale), ErrorKind::InvalidArgument, "scale must be > 0");
  const auto rect = obj.foreground_rect();
  if (!rect) fail(ErrorKind::EmptyMask, "object '" + obj.label + "' has no foreground pixels");
  return {std::max(1, static_cast<int>(std::lround((*rect)[2] * scale))),
          std::max(1, static_cast<int>(std::lround((*rect)[3] * scale)))};
}

PasteResult paste_object(const RasterImage& dst, const MaskedObject& obj, Placement placement) {
  const auto rect = obj.foreground_rect();
  if (!rect) fail(ErrorKind::EmptyMask, "object '" + obj.label + "' has no foreground pixels");
  const auto [sw, sh] = scaled_size(obj, placement.scale);
  if (placement.x < 0 || placement.y < 0 || placement.x + sw > dst.width() ||
      placement.y + sh > dst.height()) {
    fail(ErrorKind::PlacementOutOfBounds,
         "scaled object " + std::to_string(sw) + "x" + std::to_string(sh) + " at (" +
             std::to_string(placement.x) + "," + std::to_string(placement.y) + ") exceeds " +
             std::to_string(dst.width()) + "x" + std::to_string(dst.height()));
  }
  const auto [bx, by, bw, bh] = *rect;
  const RasterImage& src = obj.source;
  RasterImage out = dst;
  int min_x = sw, min_y = sh, max_x = -1, max_y = -1;
  std::array<double, 3> color{};
  for (int j = 0; j < sh; ++j) {
    const double fy = by + (j + 0.5) * bh / sh;
    const int my = std::clamp(static_cast<int>(std::floor(fy)), by, by + bh - 1);
    for (int i = 0; i < sw; ++i) {
      const double fx = bx + (i + 0.5) * bw / sw;
      const int mx = std::clamp(static_cast<int>(std::floor(fx)), bx, bx + bw - 1);
      if (obj.mask.at(mx, my) == 0) continue;
      sample_bilinear(src, std::clamp(fx - 0.5, 0.0, src.width() - 1.0),
                      std::clamp(fy - 0.5, 0.0, src.height() - 1.0), color);
      const int ox = placement.x + i;
      const int oy = placement.y + j;
      auto channel = [&](int c) {
        return static_cast<std::uint8_t>(std::clamp(std::floor(color[static_cast<std::size_t>(c)] + 0.5), 0.0, 255.0));
      };
      if (out.channels() == src.channels()) {
        for (int c = 0; c < out.channels(); ++c) out.at(ox, oy, c) = channel(c);
      } else if (out.channels() == 3) {
        for (int c = 0; c < 3; ++c) out.at(ox, oy, c) = channel(0);
      } else {
        const double luma = 0.299 * color[0] + 0.587 * color[1] + 0.114 * color[2];
        out.at(ox, oy) = static_cast<std::uint8_t>(std::clamp(std::floor(luma + 0.5), 0.0, 255.0));
      }
      min_x = std::min(min_x, i);
      min_y = std::min(min_y, j);
      max_x = std::max(max_x, i);
      max_y = std::max(max_y, j);
    }
  }
  if (max_x < 0) fail(ErrorKind::EmptyMask, "object '" + obj.label + "' vanished at this scale");
  return PasteResult{std::move(out), BBox(placement.x + min_x, placement.y + min_y,
                                          placement.x + max_x + 1, placement.y + max_y + 1)};
}

}  // namespace pairscan::synth
