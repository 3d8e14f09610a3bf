#include "pairscan/synth/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "pairscan/align/compose.hpp"
#include "pairscan/error.hpp"
#include "pairscan/random.hpp"
#include "pairscan/worker_pool.hpp"

namespace pairscan::synth {

void SynthConfig::validate() const {
  perturbation.validate();
  style.validate();
  require(min_objects >= 1 && min_objects <= max_objects, ErrorKind::InvalidArgument,
          "object count range must satisfy 1 <= min <= max");
  require(min_dummies <= max_dummies, ErrorKind::InvalidArgument, "dummy count range inverted");
  require(object_scale.lo > 0.0 && object_scale.lo <= object_scale.hi, ErrorKind::InvalidArgument,
          "object scale range must be positive and ordered");
  require(max_object_fraction > 0.0 && max_object_fraction <= 1.0, ErrorKind::InvalidArgument,
          "max_object_fraction must be in (0, 1]");
  require(placement_attempts >= 1, ErrorKind::InvalidArgument, "placement_attempts must be >= 1");
}

std::string synth_sample_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth_%06zu", index);
  return buf;
}

namespace {

RasterImage match_channels(const RasterImage& img, int channels) {
  if (img.channels() == channels) return img;
  if (channels == 1) return img.to_gray();
  RasterImage out(img.width(), img.height(), 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y);
    }
  }
  return out;
}

std::vector<std::string> dummy_pool_for(std::span<const MaskedObject> objects,
                                        const SynthConfig& cfg,
                                        const std::vector<std::string>& actual) {
  std::set<std::string> pool;
  for (const auto& o : objects) pool.insert(o.label);
  for (const auto& l : cfg.extra_dummy_labels) pool.insert(trim(l));
  for (const auto& a : actual) pool.erase(a);
  pool.erase("");
  return {pool.begin(), pool.end()};
}

}  // namespace

std::optional<SynthRecord> generate_synth_record(std::size_t index,
                                                 std::span<const RasterImage> destinations,
                                                 std::span<const MaskedObject> objects,
                                                 const SynthConfig& cfg, std::uint64_t seed,
                                                 std::vector<SynthWarning>& warnings) {
  require(!destinations.empty(), ErrorKind::InvalidArgument, "no destination images");
  require(!objects.empty(), ErrorKind::InvalidArgument, "no masked objects");
  const std::uint64_t record_seed = derive_seed(seed, static_cast<std::uint64_t>(index));
  Rng rng(record_seed);

  SynthRecord rec;
  rec.index = index;
  rec.sample_id = synth_sample_id(index);
  rec.destination_index = rng.index(destinations.size());
  const RasterImage& dest = destinations[rec.destination_index];
  rec.target = dest;

  const auto count = static_cast<std::size_t>(
      rng.integer(static_cast<std::int64_t>(cfg.min_objects), static_cast<std::int64_t>(cfg.max_objects)));
  for (std::size_t k = 0; k < count; ++k) {
    const MaskedObject& obj = objects[rng.index(objects.size())];
    const auto rect = obj.foreground_rect();
    if (!rect) {
      warnings.push_back({index, "object '" + obj.label + "' skipped: EmptyMask"});
      continue;
    }
    MaskedObject fitted{match_channels(obj.source, dest.channels()), obj.mask, obj.label};
    const double fit = cfg.max_object_fraction *
                       std::min(static_cast<double>(dest.width()) / (*rect)[2],
                                static_cast<double>(dest.height()) / (*rect)[3]);
    bool placed = false;
    for (int attempt = 0; attempt < cfg.placement_attempts && !placed; ++attempt) {
      const double scale = std::min(rng.uniform(cfg.object_scale.lo, cfg.object_scale.hi), fit);
      const auto [sw, sh] = scaled_size(fitted, scale);
      const int x = static_cast<int>(rng.integer(0, std::max(0, dest.width() - sw)));
      const int y = static_cast<int>(rng.integer(0, std::max(0, dest.height() - sh)));
      try {
        auto pasted = paste_object(rec.target, fitted, {x, y, scale});
        const bool crowded = std::any_of(rec.injected.begin(), rec.injected.end(), [&](const LabeledBox& b) {
          return iou(b.bbox(), pasted.bbox) > cfg.max_overlap_iou;
        });
        if (crowded) continue;
        rec.target = std::move(pasted.image);
        rec.injected.emplace_back(pasted.bbox, obj.label);
        placed = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PlacementOutOfBounds) throw;
      }
    }
    if (!placed) {
      warnings.push_back({index, "object '" + obj.label + "' skipped after " +
                                     std::to_string(cfg.placement_attempts) + " placement attempts"});
    }
  }
  if (rec.injected.empty()) {
    warnings.push_back({index, "record " + rec.sample_id + " skipped: no object could be pasted"});
    return std::nullopt;
  }

  PerturbationConfig pcfg = cfg.perturbation;
  pcfg.seed = derive_seed(record_seed, "perturbation");
  auto perturbed = perturb_reference(dest, pcfg);
  rec.reference = std::move(perturbed.image);
  rec.perturbation = perturbed.transform;
  rec.composite = align::compose_pair(rec.target, rec.reference);

  std::vector<std::string> actual;
  for (const auto& b : rec.injected) {
    if (std::find(actual.begin(), actual.end(), b.label()) == actual.end()) actual.push_back(b.label());
  }
  const auto pool = dummy_pool_for(objects, cfg, actual);
  auto n_dummies = static_cast<std::size_t>(
      rng.integer(static_cast<std::int64_t>(cfg.min_dummies), static_cast<std::int64_t>(cfg.max_dummies)));
  n_dummies = std::min(n_dummies, pool.size());
  auto prompt = build_prompt(cfg.style, actual, pool, n_dummies, derive_seed(record_seed, "prompt"));
  rec.prompt = std::move(prompt.text);
  rec.prompt_classes = std::move(prompt.classes);
  for (const auto& c : rec.prompt_classes) {
    if (std::find(actual.begin(), actual.end(), c) == actual.end()) rec.dummy_classes.push_back(c);
  }
  return rec;
}

SynthOutput generate_synth_dataset(std::span<const RasterImage> destinations,
                                   std::span<const MaskedObject> objects, const SynthConfig& cfg,
                                   std::size_t n, std::uint64_t seed, std::size_t workers) {
  cfg.validate();
  require(n == 0 || (!destinations.empty() && !objects.empty()), ErrorKind::InvalidArgument,
          "synthesis needs destinations and objects");
  std::vector<std::optional<SynthRecord>> slots(n);
  std::vector<std::vector<SynthWarning>> slot_warnings(n);
  parallel_for(n, workers, [&](std::size_t i) {
    slots[i] = generate_synth_record(i, destinations, objects, cfg, seed, slot_warnings[i]);
  });
  SynthOutput out;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) out.records.push_back(std::move(*slots[i]));
    for (auto& w : slot_warnings[i]) out.warnings.push_back(std::move(w));
  }
  return out;
}

}  // namespace pairscan::synth
