#include "pairscan/synth/perturb.hpp"

#include <cmath>
#include <numbers>

#include "pairscan/align/compose.hpp"
#include "pairscan/error.hpp"
#include "pairscan/random.hpp"

namespace pairscan::synth {

PerturbationConfig PerturbationConfig::none(std::uint64_t seed) {
  return PerturbationConfig{{0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}, seed};
}

void PerturbationConfig::validate() const {
  for (const Range& r : {rotation_deg, translation_frac, scale}) {
    require(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi, ErrorKind::InvalidArgument,
            "perturbation ranges must be finite with lo <= hi");
  }
  require(scale.lo > 0.0, ErrorKind::InvalidArgument, "perturbation scale must be > 0");
}

Eigen::Matrix3d sample_perturbation(const PerturbationConfig& cfg, int width, int height) {
  cfg.validate();
  Rng rng(cfg.seed);
  const double theta = rng.uniform(cfg.rotation_deg.lo, cfg.rotation_deg.hi) * std::numbers::pi / 180.0;
  const double tx = rng.uniform(cfg.translation_frac.lo, cfg.translation_frac.hi) * width;
  const double ty = rng.uniform(cfg.translation_frac.lo, cfg.translation_frac.hi) * height;
  const double s = rng.uniform(cfg.scale.lo, cfg.scale.hi);

  // p' = s R (p - c) + c + t, with c the centre of the pixel grid.
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  const double a = s * std::cos(theta);
  const double b = s * std::sin(theta);
  Eigen::Matrix3d m;
  m << a, -b, cx - a * cx + b * cy + tx,
       b,  a, cy - b * cx - a * cy + ty,
       0.0, 0.0, 1.0;
  return m;
}

PerturbResult perturb_reference(const RasterImage& ref, const PerturbationConfig& cfg) {
  Homography h(sample_perturbation(cfg, ref.width(), ref.height()));
  RasterImage warped = align::warp_reference(ref, h, ref.width(), ref.height());
  return PerturbResult{std::move(warped), h};
}

}  // namespace pairscan::synth
