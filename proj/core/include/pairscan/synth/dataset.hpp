#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairscan/geometry.hpp"
#include "pairscan/homography.hpp"
#include "pairscan/image.hpp"
#include "pairscan/synth/paste.hpp"
#include "pairscan/synth/perturb.hpp"
#include "pairscan/synth/prompt.hpp"

namespace pairscan::synth {

struct SynthConfig {
  PerturbationConfig perturbation;  // its seed is replaced per record
  PromptStyle style = PromptStyle::specific();
  std::size_t min_objects = 1;
  std::size_t max_objects = 3;
  std::size_t min_dummies = 2;
  std::size_t max_dummies = 5;
  Range object_scale{0.5, 1.5};
  /// Largest scaled object side as a fraction of the destination side.
  double max_object_fraction = 0.5;
  int placement_attempts = 20;
  /// Placements overlapping an earlier object above this IoU are redrawn.
  double max_overlap_iou = 0.3;
  /// Dummy candidates beyond the object labels themselves.
  std::vector<std::string> extra_dummy_labels;

  void validate() const;
};

struct SynthRecord {
  std::size_t index = 0;
  std::string sample_id;
  std::size_t destination_index = 0;
  RasterImage target;     // destination with objects pasted in
  RasterImage reference;  // perturbed, unmodified destination
  RasterImage composite;  // target | reference
  Homography perturbation = Homography::identity();
  std::vector<LabeledBox> injected;  // target coordinates
  std::string prompt;
  std::vector<std::string> prompt_classes;
  std::vector<std::string> dummy_classes;
};

struct SynthWarning {
  std::size_t record_index = 0;
  std::string message;
};

std::string synth_sample_id(std::size_t index);

/// One record, seeded from (seed, index) alone. Returns nullopt when no object
/// could be placed; reasons land in `warnings`.
std::optional<SynthRecord> generate_synth_record(std::size_t index,
                                                 std::span<const RasterImage> destinations,
                                                 std::span<const MaskedObject> objects,
                                                 const SynthConfig& cfg, std::uint64_t seed,
                                                 std::vector<SynthWarning>& warnings);

struct SynthOutput {
  std::vector<SynthRecord> records;  // ascending index
  std::vector<SynthWarning> warnings;
};

SynthOutput generate_synth_dataset(std::span<const RasterImage> destinations,
                                   std::span<const MaskedObject> objects, const SynthConfig& cfg,
                                   std::size_t n, std::uint64_t seed, std::size_t workers = 1);

}  // namespace pairscan::synth
