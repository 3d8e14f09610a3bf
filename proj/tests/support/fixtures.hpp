#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pairscan/align/features.hpp"
#include "pairscan/homography.hpp"
#include "pairscan/image.hpp"
#include "pairscan/random.hpp"
#include "pairscan/synth/paste.hpp"

namespace pairscan::fixtures {

/// Multi-octave value noise, smooth at the `cell` scale.
inline RasterImage smooth_texture(int w, int h, std::uint64_t seed, int channels = 1, double cell = 24.0) {
  RasterImage img(w, h, channels);
  for (int c = 0; c < channels; ++c) {
    std::vector<double> acc(static_cast<std::size_t>(w) * h, 0.0);
    double amp = 1.0, total = 0.0;
    for (int octave = 0; octave < 3; ++octave) {
      const double s = cell / std::pow(2.0, octave);
      const int gw = static_cast<int>(w / s) + 3, gh = static_cast<int>(h / s) + 3;
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c * 16 + octave)));
      std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
      for (auto& g : grid) g = rng.uniform01();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double gx = x / s, gy = y / s;
          const int ix = static_cast<int>(gx), iy = static_cast<int>(gy);
          double fx = gx - ix, fy = gy - iy;
          fx = fx * fx * (3 - 2 * fx);
          fy = fy * fy * (3 - 2 * fy);
          const auto at = [&](int i, int j) { return grid[static_cast<std::size_t>(j) * gw + i]; };
          const double v = (1 - fy) * ((1 - fx) * at(ix, iy) + fx * at(ix + 1, iy)) +
                           fy * ((1 - fx) * at(ix, iy + 1) + fx * at(ix + 1, iy + 1));
          acc[static_cast<std::size_t>(y) * w + x] += amp * v;
        }
      }
      total += amp;
      amp *= 0.5;
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double v = acc[static_cast<std::size_t>(y) * w + x] / total;
        img.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(20.0 + 215.0 * v), 0L, 255L));
      }
    }
  }
  return img;
}

/// Smooth background with random high-contrast rectangles, for corner matching.
inline RasterImage corner_scene(int w, int h, std::uint64_t seed, int channels = 3, int rects = 60) {
  RasterImage img = smooth_texture(w, h, seed, channels, 32.0);
  Rng rng(derive_seed(seed, "rects"));
  for (int r = 0; r < rects; ++r) {
    const int rw = static_cast<int>(rng.integer(6, std::max<int>(8, w / 8)));
    const int rh = static_cast<int>(rng.integer(6, std::max<int>(8, h / 8)));
    const int x0 = static_cast<int>(rng.integer(0, w - rw));
    const int y0 = static_cast<int>(rng.integer(0, h - rh));
    std::uint8_t colour[3];
    for (auto& v : colour) v = static_cast<std::uint8_t>(rng.integer(0, 255));
    for (int y = y0; y < y0 + rh; ++y) {
      for (int x = x0; x < x0 + rw; ++x) {
        for (int c = 0; c < channels; ++c) img.at(x, y, c) = colour[c];
      }
    }
  }
  return img;
}

/// Textured object with an elliptical mask.
inline synth::MaskedObject ellipse_object(int w, int h, std::uint64_t seed, std::string label, int channels = 3) {
  RasterImage src = corner_scene(w, h, seed, channels, 6);
  RasterImage mask(w, h, 1);
  const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0, rx = w / 2.0 - 0.5, ry = h / 2.0 - 0.5;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (x - cx) / rx, dy = (y - cy) / ry;
      mask.at(x, y) = dx * dx + dy * dy <= 1.0 ? 255 : 0;
    }
  }
  return synth::MaskedObject::make(std::move(src), std::move(mask), std::move(label));
}

/// Random well-conditioned homography near identity for a w x h frame:
/// rotation, anisotropic scale, shear, translation and small perspective.
inline Homography random_homography(Rng& rng, int w, int h, double perspective = 1e-4) {
  const double pi = 3.14159265358979323846;
  const double a = rng.uniform(-10.0, 10.0) * pi / 180.0;
  Eigen::Matrix3d m;
  const double sx = rng.uniform(0.9, 1.1), sy = rng.uniform(0.9, 1.1), sh = rng.uniform(-0.05, 0.05);
  m << sx * std::cos(a), -std::sin(a) + sh, rng.uniform(-0.05, 0.05) * w,  //
      std::sin(a), sy * std::cos(a), rng.uniform(-0.05, 0.05) * h,        //
      rng.uniform(-perspective, perspective), rng.uniform(-perspective, perspective), 1.0;
  Eigen::Matrix3d c = Eigen::Matrix3d::Identity(), ci = Eigen::Matrix3d::Identity();
  c(0, 2) = w / 2.0;
  c(1, 2) = h / 2.0;
  ci(0, 2) = -w / 2.0;
  ci(1, 2) = -h / 2.0;
  return Homography(c * m * ci);
}

inline std::vector<align::Correspondence> exact_correspondences(const Homography& h, Rng& rng, std::size_t n, int w,
                                                                int ht) {
  std::vector<align::Correspondence> out;
  while (out.size() < n) {
    const Point2 p{rng.uniform(0.0, w - 1.0), rng.uniform(0.0, ht - 1.0)};
    const Point2 q = h.apply(p);
    out.push_back({p, q, 1.0});
  }
  return out;
}

}  // namespace pairscan::fixtures
