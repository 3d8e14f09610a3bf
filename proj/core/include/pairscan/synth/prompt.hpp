#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pairscan::synth {

/// Placeholder replaced by the bracketed, comma-separated class list.
inline constexpr std::string_view kClassSlot = "{classes}";

enum class PromptVariant { Specific, Abstract };

struct PromptStyle {
  PromptVariant variant = PromptVariant::Specific;
  std::vector<std::string> templates;
  bool shuffle_classes = true;

  /// The two difference-detection instructions, exact class names.
  static PromptStyle specific();
  /// Same instructions phrased with generic nouns; no class list.
  static PromptStyle abstract();

  /// Specific templates must contain kClassSlot; abstract ones must not.
  void validate() const;
};

struct Prompt {
  std::string text;
  std::vector<std::string> classes;  // actual + dummies, in rendered order
};

/// "[a, b, c]"
std::string format_class_list(std::span<const std::string> classes);
std::string render_template(std::string_view tmpl, std::span<const std::string> classes);

/// Picks a template and n_dummies distinct dummy labels with a generator
/// seeded by `seed`, then renders actual + dummies (shuffled when the style
/// asks for it). Throws DummyPoolExhausted when n_dummies exceeds the pool,
/// InvalidArgument when the pool overlaps `actual` or a specific prompt would
/// have no classes.
Prompt build_prompt(const PromptStyle& style, std::span<const std::string> actual,
                    std::span<const std::string> dummy_pool, std::size_t n_dummies,
                    std::uint64_t seed);

}  // namespace pairscan::synth
