#pragma once

#include <array>
#include <optional>
#include <string>

#include "pairscan/geometry.hpp"
#include "pairscan/image.hpp"

namespace pairscan::synth {

/// An object cut from `source` by a binary instance mask (non-zero =
/// foreground). The mask is expected to have at least one foreground pixel;
/// paste_object reports EmptyMask otherwise.
struct MaskedObject {
  RasterImage source;
  RasterImage mask;
  std::string label;

  /// Throws InvalidArgument on dimension mismatch, non-gray mask or empty
  /// label. Does not reject empty masks.
  static MaskedObject make(RasterImage source, RasterImage mask, std::string label);

  /// Tight integer rectangle of foreground pixels as (x, y, w, h).
  std::optional<std::array<int, 4>> foreground_rect() const;
};

struct Placement {
  int x = 0;  // top-left of the scaled object rectangle in the destination
  int y = 0;
  double scale = 1.0;
};

struct PasteResult {
  RasterImage image;
  BBox bbox;  // tight box of the pasted foreground pixels
};

/// Width and height of the object's foreground rectangle after scaling.
std::array<int, 2> scaled_size(const MaskedObject& obj, double scale);

/// Hard-edged cut-paste: the mask is resampled nearest-neighbour, colour
/// bilinearly. Throws EmptyMask and PlacementOutOfBounds.
PasteResult paste_object(const RasterImage& dst, const MaskedObject& obj, Placement placement);

}  // namespace pairscan::synth
