#pragma once

#include <cstdint>

#include "pairscan/homography.hpp"
#include "pairscan/image.hpp"

namespace pairscan::synth {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Mild affine jitter applied to the reference half of a synthetic pair.
struct PerturbationConfig {
  Range rotation_deg{-3.0, 3.0};      // about the image centre
  Range translation_frac{-0.02, 0.02};  // x as a fraction of width, y of height
  Range scale{0.97, 1.03};            // isotropic
  std::uint64_t seed = 0;

  static PerturbationConfig none(std::uint64_t seed = 0);
  void validate() const;
};

/// Seeded affine sample for a width x height image, as a 3x3 matrix with
/// last row [0, 0, 1]. Draw order: rotation, tx, ty, scale.
Eigen::Matrix3d sample_perturbation(const PerturbationConfig& cfg, int width, int height);

struct PerturbResult {
  RasterImage image;
  Homography transform;
};

PerturbResult perturb_reference(const RasterImage& ref, const PerturbationConfig& cfg);

}  // namespace pairscan::synth
