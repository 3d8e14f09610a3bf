#include "pairscan/synth/prompt.hpp"

#include <algorithm>

#include "pairscan/error.hpp"
#include "pairscan/random.hpp"

namespace pairscan::synth {

PromptStyle PromptStyle::specific() {
  return PromptStyle{
      PromptVariant::Specific,
      {"Find the bounding boxes of objects that are present in the left image but missing in the "
       "right image: {classes}",
       "Detect all items of the specified classes that appear in the left frame but are not found "
       "in the right frame: {classes}"},
      true};
}

PromptStyle PromptStyle::abstract() {
  return PromptStyle{
      PromptVariant::Abstract,
      {"Find the bounding boxes of objects that are present in the left image but missing in the "
       "right image.",
       "Detect all items that appear in the left frame but are not found in the right frame."},
      true};
}

void PromptStyle::validate() const {
  require(!templates.empty(), ErrorKind::InvalidArgument, "prompt style needs at least one template");
  for (const auto& t : templates) {
    const bool has_slot = t.find(kClassSlot) != std::string::npos;
    if (variant == PromptVariant::Specific) {
      require(has_slot, ErrorKind::InvalidArgument, "specific template lacks {classes}: " + t);
    } else {
      require(!has_slot, ErrorKind::InvalidArgument, "abstract template names classes: " + t);
    }
  }
}

std::string format_class_list(std::span<const std::string> classes) {
  std::string out = "[";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i) out += ", ";
    out += classes[i];
  }
  out += "]";
  return out;
}

std::string render_template(std::string_view tmpl, std::span<const std::string> classes) {
  const std::string list = format_class_list(classes);
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto hit = tmpl.find(kClassSlot, pos);
    if (hit == std::string_view::npos) break;
    out.append(tmpl.substr(pos, hit - pos));
    out += list;
    pos = hit + kClassSlot.size();
  }
  out.append(tmpl.substr(pos));
  return out;
}

Prompt build_prompt(const PromptStyle& style, std::span<const std::string> actual,
                    std::span<const std::string> dummy_pool, std::size_t n_dummies,
                    std::uint64_t seed) {
  style.validate();
  for (const auto& d : dummy_pool) {
    require(std::find(actual.begin(), actual.end(), d) == actual.end(), ErrorKind::InvalidArgument,
            "dummy pool overlaps actual classes: " + d);
  }
  if (n_dummies > dummy_pool.size()) {
    fail(ErrorKind::DummyPoolExhausted, "requested " + std::to_string(n_dummies) +
                                            " dummies from a pool of " +
                                            std::to_string(dummy_pool.size()));
  }
  if (style.variant == PromptVariant::Specific) {
    require(!actual.empty() || n_dummies > 0, ErrorKind::InvalidArgument,
            "specific prompt needs at least one class");
  }
  Rng rng(seed);
  const std::string& tmpl = style.templates[rng.index(style.templates.size())];

  Prompt p;
  for (const auto& a : actual) {
    if (std::find(p.classes.begin(), p.classes.end(), a) == p.classes.end()) p.classes.push_back(a);
  }
  for (auto i : rng.sample_indices(dummy_pool.size(), n_dummies)) p.classes.push_back(dummy_pool[i]);
  if (style.shuffle_classes) rng.shuffle(std::span<std::string>(p.classes));
  p.text = render_template(tmpl, p.classes);
  return p;
}

}  // namespace pairscan::synth
