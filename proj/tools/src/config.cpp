#include "config.hpp"

#include <toml.hpp>

#include <set>
#include <sstream>

#include "pairscan/error.hpp"
#include "pairscan/jsonl.hpp"

namespace pairscan::cli {

AnomalyVocabulary RunConfig::load_vocabulary() const {
  return vocabulary.empty() ? AnomalyVocabulary::defaults() : AnomalyVocabulary::load(vocabulary);
}

namespace {

class Section {
 public:
  Section(const toml::table& t, std::string name) : t_(t), name_(std::move(name)) {}

  void allow(std::initializer_list<std::string_view> keys) { allowed_.insert(keys.begin(), keys.end()); }

  void finish() const {
    for (auto&& [k, v] : t_) {
      if (!allowed_.count(std::string(k.str()))) {
        fail(ErrorKind::InvalidArgument, "unknown config key " + where(k.str()));
      }
    }
  }

  const toml::table* table(std::string_view key) const { return t_[key].as_table(); }
  std::string path(std::string_view key) const { return where(key); }

  template <typename T>
  void get(std::string_view key, T& out) const {
    const auto node = t_[key];
    if (!node) return;
    if constexpr (std::is_same_v<T, bool>) {
      const auto v = node.value<bool>();
      if (!v) bad(key, "a boolean");
      out = *v;
    } else if constexpr (std::is_same_v<T, std::string>) {
      const auto v = node.value<std::string>();
      if (!v) bad(key, "a string");
      out = *v;
    } else if constexpr (std::is_floating_point_v<T>) {
      const auto v = node.value<double>();
      if (!v) bad(key, "a number");
      out = *v;
    } else {
      const auto v = node.value<std::int64_t>();
      if (!v || (std::is_unsigned_v<T> && *v < 0)) bad(key, "a non-negative integer");
      out = static_cast<T>(*v);
    }
  }

  void get_range(std::string_view key, synth::Range& out) const {
    const auto node = t_[key];
    if (!node) return;
    const auto* arr = node.as_array();
    if (!arr || arr->size() != 2) bad(key, "a [lo, hi] pair");
    const auto lo = (*arr)[0].value<double>();
    const auto hi = (*arr)[1].value<double>();
    if (!lo || !hi) bad(key, "a [lo, hi] pair of numbers");
    out = {*lo, *hi};
  }

  template <typename T>
  void get_list(std::string_view key, std::vector<T>& out) const {
    const auto node = t_[key];
    if (!node) return;
    const auto* arr = node.as_array();
    if (!arr) bad(key, "an array");
    out.clear();
    for (const auto& e : *arr) {
      const auto v = e.value<T>();
      if (!v) bad(key, "an array of uniform type");
      out.push_back(*v);
    }
  }

 private:
  std::string where(std::string_view key) const {
    return name_.empty() ? std::string(key) : name_ + "." + std::string(key);
  }
  [[noreturn]] void bad(std::string_view key, const char* what) const {
    fail(ErrorKind::InvalidArgument, where(key) + " must be " + what);
  }

  const toml::table& t_;
  std::string name_;
  std::set<std::string, std::less<>> allowed_;
};

synth::PromptStyle style_named(const std::string& name, const std::string& key) {
  if (name == "specific") return synth::PromptStyle::specific();
  if (name == "abstract") return synth::PromptStyle::abstract();
  fail(ErrorKind::InvalidArgument, key + " must be \"specific\" or \"abstract\"");
}

void read_endpoint(const Section& s, RunConfig& cfg) {
  auto& c = cfg.client;
  s.get("url", c.endpoint);
  std::string token;
  s.get("token", token);
  if (!token.empty()) c.bearer_token = token;
  std::int64_t timeout = c.timeout.count(), backoff = c.backoff_base.count();
  s.get("timeout_ms", timeout);
  s.get("backoff_ms", backoff);
  c.timeout = std::chrono::milliseconds(timeout);
  c.backoff_base = std::chrono::milliseconds(backoff);
  s.get("max_retries", c.max_retries);
  s.get("max_in_flight", c.max_in_flight);
  s.get("max_tokens", cfg.infer.max_tokens);
  s.get("temperature", cfg.infer.temperature);
  if (const auto* w = s.table("wire")) {
    Section ws(*w, s.path("wire"));
    ws.allow({"path", "prompt_field", "image_field", "max_tokens_field", "temperature_field", "response_text"});
    ws.get("path", c.wire.path);
    ws.get("prompt_field", c.wire.prompt_field);
    ws.get("image_field", c.wire.image_field);
    ws.get("max_tokens_field", c.wire.max_tokens_field);
    ws.get("temperature_field", c.wire.temperature_field);
    ws.get("response_text", c.wire.response_text);
    ws.finish();
  }
}

void read_pair(const Section& s, RunConfig& cfg) {
  s.get("candidates", cfg.candidates);
  if (const auto* r = s.table("ransac")) {
    Section rs(*r, s.path("ransac"));
    rs.allow({"max_iterations", "inlier_threshold", "min_inliers", "confidence"});
    rs.get("max_iterations", cfg.ransac.max_iterations);
    rs.get("inlier_threshold", cfg.ransac.inlier_threshold);
    rs.get("min_inliers", cfg.ransac.min_inliers);
    rs.get("confidence", cfg.ransac.confidence);
    rs.finish();
  }
  if (const auto* m = s.table("matcher")) {
    Section ms(*m, s.path("matcher"));
    ms.allow({"max_corners", "ratio"});
    ms.get("max_corners", cfg.matcher.max_corners);
    ms.get("ratio", cfg.matcher.ratio);
    ms.finish();
  }
}

void read_synth(const Section& s, RunConfig& cfg) {
  auto& sc = cfg.synth;
  s.get("min_objects", sc.min_objects);
  s.get("max_objects", sc.max_objects);
  s.get("min_dummies", sc.min_dummies);
  s.get("max_dummies", sc.max_dummies);
  s.get_range("object_scale", sc.object_scale);
  s.get("max_object_fraction", sc.max_object_fraction);
  s.get("placement_attempts", sc.placement_attempts);
  s.get("max_overlap_iou", sc.max_overlap_iou);
  std::string style;
  s.get("style", style);
  if (!style.empty()) sc.style = style_named(style, s.path("style"));
  s.get("shuffle_classes", sc.style.shuffle_classes);
  s.get_list("extra_dummy_labels", sc.extra_dummy_labels);
  if (const auto* p = s.table("perturbation")) {
    Section ps(*p, s.path("perturbation"));
    ps.allow({"rotation_deg", "translation_frac", "scale"});
    ps.get_range("rotation_deg", sc.perturbation.rotation_deg);
    ps.get_range("translation_frac", sc.perturbation.translation_frac);
    ps.get_range("scale", sc.perturbation.scale);
    ps.finish();
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view toml_text, std::string_view origin) {
  toml::table root;
  try {
    root = toml::parse(toml_text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e;
    fail(ErrorKind::Parse, msg.str());
  }
  RunConfig cfg;
  Section top(root, "");
  top.allow({"seed", "workers", "output_dir", "vocabulary", "endpoint", "pair", "synth", "infer", "eval", "mock"});
  if (root["seed"]) {
    const auto raw = root["seed"].value<std::int64_t>();
    require(raw && *raw >= 0, ErrorKind::InvalidArgument, "seed must be a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(*raw);
  }
  top.get("workers", cfg.workers);
  std::string out_dir, vocab;
  top.get("output_dir", out_dir);
  top.get("vocabulary", vocab);
  cfg.output_dir = out_dir;
  cfg.vocabulary = vocab;

  const auto section = [&](std::string_view name, std::initializer_list<std::string_view> keys, auto&& read) {
    if (const auto* t = top.table(name)) {
      Section s(*t, std::string(name));
      s.allow(keys);
      read(s);
      s.finish();
    }
  };
  section("endpoint",
          {"url", "token", "timeout_ms", "backoff_ms", "max_retries", "max_in_flight", "max_tokens", "temperature",
           "wire"},
          [&](const Section& s) { read_endpoint(s, cfg); });
  section("pair", {"candidates", "ransac", "matcher"}, [&](const Section& s) { read_pair(s, cfg); });
  section("synth",
          {"min_objects", "max_objects", "min_dummies", "max_dummies", "object_scale", "max_object_fraction",
           "placement_attempts", "max_overlap_iou", "style", "shuffle_classes", "extra_dummy_labels",
           "perturbation"},
          [&](const Section& s) { read_synth(s, cfg); });
  section("infer", {"margin", "single_pass", "style"}, [&](const Section& s) {
    s.get("margin", cfg.infer.margin_frac);
    s.get("single_pass", cfg.infer.single_pass);
    std::string style;
    s.get("style", style);
    if (!style.empty()) cfg.infer.style = style_named(style, s.path("style"));
  });
  section("eval", {"iou_threshold", "min_sizes", "exclude_state_driven", "size_rule"}, [&](const Section& s) {
    s.get("iou_threshold", cfg.iou_threshold);
    s.get_list("min_sizes", cfg.min_sizes);
    s.get("exclude_state_driven", cfg.exclude_state_driven);
    std::string rule;
    s.get("size_rule", rule);
    if (rule == "all") {
      cfg.size_rule = eval::SizeRule::AllBoxes;
    } else if (!rule.empty() && rule != "any") {
      fail(ErrorKind::InvalidArgument, "eval.size_rule must be \"any\" or \"all\"");
    }
  });
  section("mock", {"p_drop", "jitter_sigma", "p_label_flip", "host", "port"}, [&](const Section& s) {
    s.get("p_drop", cfg.noise.p_drop);
    s.get("jitter_sigma", cfg.noise.jitter_sigma);
    s.get("p_label_flip", cfg.noise.p_label_flip);
    s.get("host", cfg.mock_host);
    s.get("port", cfg.mock_port);
  });
  top.finish();

  const auto base = std::filesystem::path(origin).parent_path();
  if (!cfg.vocabulary.empty() && cfg.vocabulary.is_relative() && origin != "<config>") {
    cfg.vocabulary = base / cfg.vocabulary;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text_file(path), path.string());
}

}  // namespace pairscan::cli
