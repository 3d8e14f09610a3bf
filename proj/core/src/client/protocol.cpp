#include "pairscan/client/protocol.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>

#include "pairscan/error.hpp"
#include "pairscan/records.hpp"

namespace pairscan::client {

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) return {};
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.empty()) return {};
  if (text.size() % 4 != 0) fail(ErrorKind::ProtocolError, "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) fail(ErrorKind::ProtocolError, "invalid base64");
  std::size_t len = static_cast<std::size_t>(n);
  // EVP_DecodeBlock keeps the bytes that padding stands for.
  if (text.back() == '=') --len;
  if (text.size() >= 2 && text[text.size() - 2] == '=') --len;
  out.resize(len);
  return out;
}

Json encode_request(const ModelRequest& req, const WireMapping& wire) {
  Json body = Json::object();
  body[wire.prompt_field] = req.prompt;
  body[wire.image_field] = base64_encode(req.image_png);
  body[wire.max_tokens_field] = req.max_tokens;
  body[wire.temperature_field] = req.temperature;
  return body;
}

ModelRequest decode_request(const Json& body) {
  if (!body.is_object()) fail(ErrorKind::ProtocolError, "request body must be a JSON object");
  if (!body.contains("prompt") || !body["prompt"].is_string()) {
    fail(ErrorKind::ProtocolError, "request lacks string field \"prompt\"");
  }
  ModelRequest req;
  req.prompt = body["prompt"].get<std::string>();
  if (body.contains("image_b64")) {
    if (!body["image_b64"].is_string()) fail(ErrorKind::ProtocolError, "\"image_b64\" must be a string");
    req.image_png = base64_decode(body["image_b64"].get<std::string>());
  }
  if (body.contains("max_tokens") && body["max_tokens"].is_number_integer()) {
    req.max_tokens = body["max_tokens"].get<int>();
  }
  if (body.contains("temperature") && body["temperature"].is_number()) {
    req.temperature = body["temperature"].get<double>();
  }
  return req;
}

std::string decode_response_text(const Json& body, const WireMapping& wire) {
  Json::json_pointer ptr;
  try {
    ptr = Json::json_pointer(wire.response_text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("bad response_text pointer: ") + e.what());
  }
  if (!body.contains(ptr)) fail(ErrorKind::ProtocolError, "response lacks " + wire.response_text);
  const auto& v = body.at(ptr);
  if (!v.is_string()) fail(ErrorKind::ProtocolError, wire.response_text + " is not a string");
  return v.get<std::string>();
}

namespace {
constexpr std::string_view kTrailerKey = "\n\nsample_id=";
constexpr std::string_view kCropKey = " crop=";

std::string fmt_coord(double v) {
  Json j = v;
  return j.dump();
}
}  // namespace

std::string with_trailer(std::string_view prompt, std::string_view sample_id,
                         const std::optional<BBox>& crop) {
  std::string out(prompt);
  out += kTrailerKey;
  out += sample_id;
  if (crop) {
    out += kCropKey;
    out += "[" + fmt_coord(crop->x1()) + "," + fmt_coord(crop->y1()) + "," + fmt_coord(crop->x2()) +
           "," + fmt_coord(crop->y2()) + "]";
  }
  return out;
}

std::optional<Trailer> parse_trailer(std::string_view prompt) {
  const auto pos = prompt.rfind(kTrailerKey);
  if (pos == std::string_view::npos) return std::nullopt;
  Trailer t;
  t.body = std::string(prompt.substr(0, pos));
  std::string_view rest = prompt.substr(pos + kTrailerKey.size());
  rest = rest.substr(0, static_cast<std::size_t>(std::find(rest.begin(), rest.end(), '\n') - rest.begin()));
  if (const auto c = rest.rfind(kCropKey); c != std::string_view::npos) {
    const Json box = Json::parse(rest.substr(c + kCropKey.size()), nullptr, false);
    try {
      if (!box.is_discarded()) t.crop = bbox_from_json(box);
    } catch (const Error&) {
    }
    if (t.crop) rest = rest.substr(0, c);
  }
  t.sample_id = trim(rest);
  if (t.sample_id.empty()) return std::nullopt;
  return t;
}

namespace {

// End index (inclusive) of the bracketed region starting at text[open], with
// JSON string literals skipped; npos when unbalanced.
std::size_t matching_bracket(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_string) {
      if (ch == '\\') {
        ++i;
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') {
      in_string = true;
    } else if (ch == '[' || ch == '{') {
      ++depth;
    } else if (ch == ']' || ch == '}') {
      if (--depth == 0) return ch == ']' ? i : std::string_view::npos;
      if (depth < 0) return std::string_view::npos;
    }
  }
  return std::string_view::npos;
}

std::optional<Json> first_object_array(std::string_view text) {
  for (auto open = text.find('['); open != std::string_view::npos; open = text.find('[', open + 1)) {
    const auto close = matching_bracket(text, open);
    if (close == std::string_view::npos) continue;
    Json candidate = Json::parse(text.substr(open, close - open + 1), nullptr, false);
    if (candidate.is_discarded() || !candidate.is_array()) continue;
    if (std::all_of(candidate.begin(), candidate.end(), [](const Json& e) { return e.is_object(); })) {
      return candidate;
    }
  }
  return std::nullopt;
}

}  // namespace

ParsedDetections parse_detections(std::string_view text, double width, double height) {
  ParsedDetections out;
  const auto array = first_object_array(text);
  if (!array) {
    if (text.find('[') != std::string_view::npos) out.warnings.unparseable = 1;
    return out;
  }
  for (const auto& entry : *array) {
    const auto bbox = entry.find("bbox");
    const auto label = entry.find("label");
    if (bbox == entry.end() || label == entry.end() || !bbox->is_array() || bbox->size() != 4 ||
        !label->is_string() ||
        !std::all_of(bbox->begin(), bbox->end(), [](const Json& v) { return v.is_number(); })) {
      ++out.warnings.malformed;
      continue;
    }
    const std::string name = trim(label->get<std::string>());
    if (name.empty()) {
      ++out.warnings.empty_label;
      continue;
    }
    const double x1 = std::clamp((*bbox)[0].get<double>(), 0.0, width);
    const double y1 = std::clamp((*bbox)[1].get<double>(), 0.0, height);
    const double x2 = std::clamp((*bbox)[2].get<double>(), 0.0, width);
    const double y2 = std::clamp((*bbox)[3].get<double>(), 0.0, height);
    if (!BBox::is_valid(x1, y1, x2, y2)) {
      ++out.warnings.degenerate;
      continue;
    }
    out.boxes.emplace_back(BBox(x1, y1, x2, y2), name);
  }
  return out;
}

std::string detections_to_text(std::span<const LabeledBox> boxes) {
  Json arr = Json::array();
  for (const auto& b : boxes) arr.push_back(to_json(b));
  return arr.dump();
}

}  // namespace pairscan::client
