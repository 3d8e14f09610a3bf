#include "pairscan/twopass/inference.hpp"

#include <atomic>
#include <mutex>

#include "pairscan/error.hpp"
#include "pairscan/image_io.hpp"
#include "pairscan/worker_pool.hpp"

namespace pairscan::twopass {

void InferenceConfig::validate() const {
  style.validate();
  require(margin_frac >= 0.0 && margin_frac <= 1.0, ErrorKind::InvalidArgument,
          "crop margin must be in [0, 1]");
  require(max_tokens > 0, ErrorKind::InvalidArgument, "max_tokens must be positive");
  require(temperature >= 0.0, ErrorKind::InvalidArgument, "temperature must be >= 0");
  require(workers >= 1, ErrorKind::InvalidArgument, "workers must be >= 1");
}

std::string detection_prompt(const AnomalyVocabulary& vocab, const synth::PromptStyle& style) {
  style.validate();
  std::string out = synth::render_template(style.templates.front(), vocab.labels());
  out += "\n";
  out += client::kDetectionFormatInstruction;
  return out;
}

std::string classification_prompt(const AnomalyVocabulary& vocab) {
  return std::string(client::kClassificationPrefix) + synth::format_class_list(vocab.labels()) +
         std::string(client::kClassificationSuffix);
}

std::string normalize_label(std::string_view answer) {
  std::string s = trim(answer);
  while (!s.empty() && s.back() == '.') s = trim(s.substr(0, s.size() - 1));
  while (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = trim(s.substr(1, s.size() - 2));
  }
  while (!s.empty() && s.back() == '.') s = trim(s.substr(0, s.size() - 1));
  return s;
}

PassOneResult run_pass1(const RasterImage& composite, int target_width, std::string_view sample_id,
                        const AnomalyVocabulary& vocab, const InferenceConfig& cfg,
                        client::ModelClient& client) {
  require(target_width > 0 && target_width <= composite.width(), ErrorKind::InvalidArgument,
          "target width outside the composite");
  client::ModelRequest req;
  req.prompt = client::with_trailer(detection_prompt(vocab, cfg.style), sample_id);
  req.image_png = encode_png(composite);
  req.max_tokens = cfg.max_tokens;
  req.temperature = cfg.temperature;

  PassOneResult out;
  out.raw_text = client.send(req).text;
  auto parsed = client::parse_detections(out.raw_text, composite.width(), composite.height());
  out.parse_warnings = parsed.warnings.total();
  for (auto& d : parsed.boxes) {
    if (d.bbox().center().x < target_width) {
      out.detections.push_back(std::move(d));
    } else {
      ++out.side_violations;
    }
  }
  return out;
}

FinalResult run_pass2(const RasterImage& target, const PassOneResult& pass1, std::string_view sample_id,
                      const AnomalyVocabulary& vocab, const InferenceConfig& cfg,
                      client::ModelClient& client) {
  const std::string question = classification_prompt(vocab);
  FinalResult out;
  for (const auto& d : pass1.detections) {
    Provenance prov{d.label(), d.label(), std::nullopt};
    try {
      const auto crop = crop_with_margin(target, d.bbox(), cfg.margin_frac);
      prov.crop = crop.region();
      client::ModelRequest req;
      req.prompt = client::with_trailer(question, sample_id, prov.crop);
      req.image_png = encode_png(crop.image);
      req.max_tokens = cfg.max_tokens;
      req.temperature = cfg.temperature;
      const std::string label = normalize_label(client.send(req).text);
      if (vocab.contains(label)) {
        prov.pass2_label = label;
      } else {
        ++out.label_fallbacks;
      }
    } catch (const Error& e) {
      if (!is_endpoint_error(e.kind()) && e.kind() != ErrorKind::EmptyIntersection) throw;
      ++out.request_failures;
      ++out.label_fallbacks;
    }
    out.detections.emplace_back(d.bbox(), prov.pass2_label);
    out.provenance.push_back(std::move(prov));
  }
  return out;
}

FinalResult single_pass(const PassOneResult& pass1) {
  FinalResult out;
  out.detections = pass1.detections;
  for (const auto& d : pass1.detections) out.provenance.push_back({d.label(), d.label(), std::nullopt});
  return out;
}

SampleInference infer_sample(const SampleRecord& sample, const Manifest& manifest,
                             const AnomalyVocabulary& vocab, const InferenceConfig& cfg,
                             client::ModelClient& client) {
  SampleInference out;
  out.sample_id = sample.sample_id;
  try {
    require(sample.pair.has_value() && !sample.pair->composite.empty(), ErrorKind::InvalidArgument,
            "sample has no composite; run pair first");
    const RasterImage composite = read_png(manifest.resolve(sample.pair->composite));
    const int target_width = composite.width() / 2;
    out.pass1 = run_pass1(composite, target_width, sample.sample_id, vocab, cfg, client);
    if (cfg.single_pass) {
      out.final = single_pass(out.pass1);
    } else {
      const RasterImage target = composite.crop(0, 0, target_width, composite.height());
      out.final = run_pass2(target, out.pass1, sample.sample_id, vocab, cfg, client);
    }
  } catch (const Error& e) {
    out.error = e.what();
    out.endpoint_failure = is_endpoint_error(e.kind());
    out.pass1 = {};
    out.final = {};
  }
  return out;
}

Json to_json(const SampleInference& r) {
  Json dets = Json::array();
  for (std::size_t i = 0; i < r.final.detections.size(); ++i) {
    const auto& d = r.final.detections[i];
    const auto& p = r.final.provenance[i];
    Json j{{"bbox", to_json(d.bbox())},
           {"label", d.label()},
           {"pass1_label", p.pass1_label},
           {"pass2_label", p.pass2_label}};
    j["crop"] = p.crop ? to_json(*p.crop) : Json(nullptr);
    dets.push_back(std::move(j));
  }
  Json row{{"sample_id", r.sample_id},
           {"detections", std::move(dets)},
           {"warnings",
            {{"parse", r.pass1.parse_warnings},
             {"side_violation", r.pass1.side_violations},
             {"label_fallback", r.final.label_fallbacks},
             {"request_failure", r.final.request_failures}}}};
  if (r.error) row["error"] = *r.error;
  return row;
}

std::vector<LabeledBox> detections_from_json(const Json& row) {
  std::vector<LabeledBox> out;
  if (!row.contains("detections")) return out;
  if (!row["detections"].is_array()) fail(ErrorKind::Parse, "\"detections\" must be an array");
  for (const auto& d : row["detections"]) out.push_back(labeled_box_from_json(d));
  return out;
}

InferenceRun infer_manifest(const Manifest& manifest, const AnomalyVocabulary& vocab,
                            const InferenceConfig& cfg, client::ModelClient& client) {
  cfg.validate();
  const std::size_t n = manifest.records.size();
  InferenceRun run;
  run.results.resize(n);
  std::atomic<bool> abort{false};
  std::mutex streak_mutex;
  std::size_t streak = 0;
  parallel_for(n, cfg.workers, [&](std::size_t i) {
    const auto& rec = manifest.records[i];
    if (abort.load()) {
      run.results[i].sample_id = rec.sample_id;
      run.results[i].error = "skipped: run aborted after repeated endpoint failures";
      return;
    }
    run.results[i] = infer_sample(rec, manifest, vocab, cfg, client);
    std::lock_guard lock(streak_mutex);
    streak = run.results[i].endpoint_failure ? streak + 1 : 0;
    if (streak >= kAbortAfterConsecutiveFailures) abort = true;
  });
  run.aborted = abort.load();
  return run;
}

}  // namespace pairscan::twopass
