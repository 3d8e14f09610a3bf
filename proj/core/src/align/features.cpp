#include "pairscan/align/features.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

#include "pairscan/error.hpp"
#include "pairscan/jsonl.hpp"
#include "pairscan/random.hpp"

namespace pairscan::align {

namespace {

constexpr int kPatchRadius = 15;
constexpr int kBorder = kPatchRadius + 3;
constexpr int kDescriptorBits = 256;
constexpr std::uint64_t kPatternSeed = 0x5eed0b1e5eedULL;

using Descriptor = std::array<std::uint64_t, kDescriptorBits / 64>;

struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<float> v;

  float at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
};

// Separable [1 4 6 4 1] / 16 blur with edge clamping.
FloatImage binomial_blur(const FloatImage& in) {
  constexpr std::array<float, 5> k{1.f / 16, 4.f / 16, 6.f / 16, 4.f / 16, 1.f / 16};
  FloatImage tmp{in.width, in.height, std::vector<float>(in.v.size())};
  FloatImage out{in.width, in.height, std::vector<float>(in.v.size())};
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      float s = 0.f;
      for (int i = -2; i <= 2; ++i) s += k[i + 2] * in.at(std::clamp(x + i, 0, in.width - 1), y);
      tmp.at(x, y) = s;
    }
  }
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      float s = 0.f;
      for (int i = -2; i <= 2; ++i) s += k[i + 2] * tmp.at(x, std::clamp(y + i, 0, in.height - 1));
      out.at(x, y) = s;
    }
  }
  return out;
}

FloatImage to_float(const RasterImage& gray) {
  FloatImage f{gray.width(), gray.height(), std::vector<float>(gray.data().size())};
  std::transform(gray.data().begin(), gray.data().end(), f.v.begin(),
                 [](std::uint8_t p) { return static_cast<float>(p); });
  return f;
}

struct SamplingPair {
  int x1, y1, x2, y2;
};

// Fixed test-point pattern: isotropic Gaussian offsets (sigma = patch / 5),
// clipped to the patch, drawn once from a constant seed.
const std::vector<SamplingPair>& sampling_pattern() {
  static const std::vector<SamplingPair> pattern = [] {
    std::vector<SamplingPair> p;
    Rng rng(kPatternSeed);
    const double sigma = (2 * kPatchRadius + 1) / 5.0;
    auto draw = [&] {
      return std::clamp(static_cast<int>(std::lround(rng.normal(0.0, sigma))), -kPatchRadius,
                        kPatchRadius);
    };
    while (p.size() < kDescriptorBits) {
      SamplingPair s{draw(), draw(), draw(), draw()};
      if (s.x1 == s.x2 && s.y1 == s.y2) continue;
      p.push_back(s);
    }
    return p;
  }();
  return pattern;
}

Descriptor describe(const FloatImage& smooth, const Keypoint& kp) {
  Descriptor d{};
  const auto& pattern = sampling_pattern();
  for (int i = 0; i < kDescriptorBits; ++i) {
    const auto& s = pattern[static_cast<std::size_t>(i)];
    if (smooth.at(kp.x + s.x1, kp.y + s.y1) < smooth.at(kp.x + s.x2, kp.y + s.y2)) {
      d[static_cast<std::size_t>(i / 64)] |= (std::uint64_t{1} << (i % 64));
    }
  }
  return d;
}

int hamming(const Descriptor& a, const Descriptor& b) {
  int n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += std::popcount(a[i] ^ b[i]);
  return n;
}

struct Features {
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor> descriptors;
};

Features extract(const RasterImage& img, const MatcherConfig& cfg) {
  const RasterImage gray = img.to_gray();
  Features f;
  f.keypoints = detect_corners(gray, cfg);
  const FloatImage smooth = binomial_blur(to_float(gray));
  f.descriptors.reserve(f.keypoints.size());
  for (const auto& kp : f.keypoints) f.descriptors.push_back(describe(smooth, kp));
  return f;
}

struct Nearest {
  int index = -1;
  int best = std::numeric_limits<int>::max();
  int second = std::numeric_limits<int>::max();
};

std::vector<Nearest> nearest(const std::vector<Descriptor>& from, const std::vector<Descriptor>& to) {
  std::vector<Nearest> out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    Nearest n;
    for (std::size_t j = 0; j < to.size(); ++j) {
      const int d = hamming(from[i], to[j]);
      if (d < n.best) {
        n.second = n.best;
        n.best = d;
        n.index = static_cast<int>(j);
      } else if (d < n.second) {
        n.second = d;
      }
    }
    out[i] = n;
  }
  return out;
}

}  // namespace

double mean_displacement(std::span<const Correspondence> c) {
  if (c.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& m : c) sum += distance(m.p_ref, m.p_tgt);
  return sum / static_cast<double>(c.size());
}

MatchResult make_match_result(std::vector<Correspondence> c) {
  MatchResult r;
  r.mean_distance = mean_displacement(c);
  r.correspondences = std::move(c);
  return r;
}

std::vector<Keypoint> detect_corners(const RasterImage& gray, const MatcherConfig& cfg) {
  require(gray.channels() == 1, ErrorKind::InvalidArgument, "detect_corners needs a gray image");
  const int w = gray.width();
  const int h = gray.height();
  const FloatImage smooth = binomial_blur(to_float(gray));

  FloatImage ixx{w, h, std::vector<float>(smooth.v.size(), 0.f)};
  FloatImage iyy = ixx;
  FloatImage ixy = ixx;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const float gx = 0.5f * (smooth.at(x + 1, y) - smooth.at(x - 1, y));
      const float gy = 0.5f * (smooth.at(x, y + 1) - smooth.at(x, y - 1));
      ixx.at(x, y) = gx * gx;
      iyy.at(x, y) = gy * gy;
      ixy.at(x, y) = gx * gy;
    }
  }
  ixx = binomial_blur(ixx);
  iyy = binomial_blur(iyy);
  ixy = binomial_blur(ixy);

  FloatImage response{w, h, std::vector<float>(smooth.v.size(), 0.f)};
  float peak = 0.f;
  for (int y = kBorder; y < h - kBorder; ++y) {
    for (int x = kBorder; x < w - kBorder; ++x) {
      const double a = ixx.at(x, y);
      const double b = iyy.at(x, y);
      const double c = ixy.at(x, y);
      const double r = a * b - c * c - cfg.harris_k * (a + b) * (a + b);
      response.at(x, y) = static_cast<float>(r);
      peak = std::max(peak, response.at(x, y));
    }
  }
  std::vector<Keypoint> corners;
  if (peak <= 0.f) return corners;
  const float floor_response = static_cast<float>(cfg.relative_response) * peak;
  const int rad = cfg.nms_radius;
  for (int y = kBorder; y < h - kBorder; ++y) {
    for (int x = kBorder; x < w - kBorder; ++x) {
      const float r = response.at(x, y);
      if (r <= 0.f || r < floor_response) continue;
      bool is_max = true;
      for (int dy = -rad; dy <= rad && is_max; ++dy) {
        for (int dx = -rad; dx <= rad; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const float o = response.at(x + dx, y + dy);
          // Plateaus resolve to the first pixel in raster order.
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          if (o > r || (earlier && o == r)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) corners.push_back({x, y, r});
    }
  }
  std::stable_sort(corners.begin(), corners.end(),
                   [](const Keypoint& a, const Keypoint& b) { return a.response > b.response; });
  if (corners.size() > static_cast<std::size_t>(cfg.max_corners)) {
    corners.resize(static_cast<std::size_t>(cfg.max_corners));
  }
  return corners;
}

MatchResult match_features(const RasterImage& ref, const RasterImage& tgt, const MatcherConfig& cfg) {
  for (const auto* img : {&ref, &tgt}) {
    require(std::min(img->width(), img->height()) >= 64, ErrorKind::InvalidArgument,
            "images must be at least 64 px on each side");
  }
  const Features fr = extract(ref, cfg);
  const Features ft = extract(tgt, cfg);

  std::vector<Correspondence> matches;
  if (!fr.keypoints.empty() && !ft.keypoints.empty()) {
    const auto forward = nearest(fr.descriptors, ft.descriptors);
    const auto backward = nearest(ft.descriptors, fr.descriptors);
    for (std::size_t i = 0; i < forward.size(); ++i) {
      const auto& n = forward[i];
      if (n.index < 0) continue;
      if (backward[static_cast<std::size_t>(n.index)].index != static_cast<int>(i)) continue;
      if (!(n.best < cfg.ratio * n.second)) continue;
      const auto& kr = fr.keypoints[i];
      const auto& kt = ft.keypoints[static_cast<std::size_t>(n.index)];
      matches.push_back({{static_cast<double>(kr.x), static_cast<double>(kr.y)},
                         {static_cast<double>(kt.x), static_cast<double>(kt.y)},
                         1.0 - static_cast<double>(n.best) / kDescriptorBits});
    }
  }
  if (matches.size() < 4) {
    fail(ErrorKind::InsufficientFeatures,
         std::to_string(matches.size()) + " correspondences survived filtering (need 4)");
  }
  return make_match_result(std::move(matches));
}

std::vector<Correspondence> load_correspondences(const std::filesystem::path& path) {
  std::vector<Correspondence> out;
  std::size_t line = 0;
  for (const auto& row : read_jsonl(path)) {
    ++line;
    try {
      const auto r = row.at("ref").get<std::array<double, 2>>();
      const auto t = row.at("tgt").get<std::array<double, 2>>();
      const double score = row.value("score", 0.0);
      if (!std::isfinite(r[0]) || !std::isfinite(r[1]) || !std::isfinite(t[0]) ||
          !std::isfinite(t[1]) || !std::isfinite(score)) {
        fail(ErrorKind::Parse, "non-finite value");
      }
      out.push_back({{r[0], r[1]}, {t[0], t[1]}, score});
    } catch (const Json::exception& e) {
      fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": " + e.what());
    } catch (const Error& e) {
      fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

void save_correspondences(const std::filesystem::path& path, std::span<const Correspondence> c) {
  std::vector<Json> rows;
  rows.reserve(c.size());
  for (const auto& m : c) {
    rows.push_back(Json{{"ref", {m.p_ref.x, m.p_ref.y}}, {"tgt", {m.p_tgt.x, m.p_tgt.y}}, {"score", m.score}});
  }
  write_jsonl(path, rows);
}

}  // namespace pairscan::align
