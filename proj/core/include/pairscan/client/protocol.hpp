#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairscan/geometry.hpp"
#include "pairscan/jsonl.hpp"

namespace pairscan::client {

struct ModelRequest {
  std::string prompt;
  std::vector<std::uint8_t> image_png;
  int max_tokens = 1024;
  double temperature = 0.0;
};

struct ModelResponse {
  std::string text;  // may be empty; downstream treats that as no detections
  double latency_ms = 0.0;
};

/// Field names of the generation endpoint. The defaults are the native
/// protocol: POST /v1/generate {"prompt","image_b64","max_tokens",
/// "temperature"} -> {"text"}. Other services are reached by remapping the
/// request keys and pointing response_text at the reply text.
struct WireMapping {
  std::string path = "/v1/generate";
  std::string prompt_field = "prompt";
  std::string image_field = "image_b64";
  std::string max_tokens_field = "max_tokens";
  std::string temperature_field = "temperature";
  std::string response_text = "/text";  // JSON pointer
};

inline constexpr std::string_view kNativePath = "/v1/generate";

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ProtocolError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

Json encode_request(const ModelRequest& req, const WireMapping& wire = {});
/// Native-protocol request body. Throws ProtocolError when fields are
/// missing or mistyped.
ModelRequest decode_request(const Json& body);
/// Throws ProtocolError when the pointer is absent or not a string.
std::string decode_response_text(const Json& body, const WireMapping& wire = {});

// Prompt shapes shared by the pipeline and the mock oracle.
inline constexpr std::string_view kDetectionFormatInstruction =
    "Answer with a JSON array of objects {\"bbox\": [x1, y1, x2, y2], \"label\": \"<class>\"} in "
    "pixel coordinates of the full image, or [] if there is none.";
inline constexpr std::string_view kClassificationPrefix =
    "Which one of the following labels best describes the object: ";
inline constexpr std::string_view kClassificationSuffix = "? Answer with the label only.";

/// Appends "\n\nsample_id=<id>" (and " crop=[x1,y1,x2,y2]" for pass-2
/// crops); parse_trailer reads it back.
std::string with_trailer(std::string_view prompt, std::string_view sample_id,
                         const std::optional<BBox>& crop = std::nullopt);

struct Trailer {
  std::string body;  // the prompt with the trailer removed
  std::string sample_id;
  std::optional<BBox> crop;
};

std::optional<Trailer> parse_trailer(std::string_view prompt);

struct ParseWarnings {
  std::size_t unparseable = 0;    // text had brackets but no usable array
  std::size_t malformed = 0;      // entry without numeric bbox[4] / string label
  std::size_t degenerate = 0;     // inverted or empty after clamping
  std::size_t empty_label = 0;

  std::size_t total() const noexcept { return unparseable + malformed + degenerate + empty_label; }
};

struct ParsedDetections {
  std::vector<LabeledBox> boxes;
  ParseWarnings warnings;
};

/// Finds the first well-formed JSON array of {"bbox": [...], "label": ...}
/// objects anywhere in `text`, clamps boxes to [0, width] x [0, height] and
/// drops unusable entries. Never throws.
ParsedDetections parse_detections(std::string_view text, double width, double height);

/// The output grammar parse_detections reads: a compact JSON array.
std::string detections_to_text(std::span<const LabeledBox> boxes);

}  // namespace pairscan::client
