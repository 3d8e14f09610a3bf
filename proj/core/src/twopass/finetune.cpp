#include "pairscan/twopass/finetune.hpp"

#include "pairscan/client/protocol.hpp"
#include "pairscan/error.hpp"
#include "pairscan/image_io.hpp"
#include "pairscan/twopass/inference.hpp"

namespace pairscan::twopass {

namespace fs = std::filesystem;

Json to_json(const FinetuneRecord& r) {
  return Json{{"image", r.image}, {"prompt", r.prompt}, {"answer", r.answer}};
}

namespace {

std::string relative_to(const fs::path& p, const fs::path& base) {
  return fs::absolute(p).lexically_normal().lexically_relative(fs::absolute(base).lexically_normal()).generic_string();
}

}  // namespace

FinetuneExport export_finetune_records(const Manifest& manifest, const AnomalyVocabulary& vocab,
                                       const synth::PromptStyle& style, double margin_frac,
                                       const fs::path& out_dir) {
  require(margin_frac >= 0.0, ErrorKind::InvalidArgument, "crop margin must be >= 0");
  const std::string detect = detection_prompt(vocab, style);
  const std::string classify = classification_prompt(vocab);

  FinetuneExport out;
  for (const auto& rec : manifest.records) {
    RasterImage target;
    if (rec.pair && !rec.pair->composite.empty()) {
      const fs::path composite = manifest.resolve(rec.pair->composite);
      out.pass1.push_back({relative_to(composite, out_dir), detect,
                           client::detections_to_text(rec.ground_truth)});
      if (!rec.ground_truth.empty()) {
        const RasterImage full = read_png(composite);
        target = full.crop(0, 0, full.width() / 2, full.height());
      }
    } else {
      require(!rec.target_image.empty(), ErrorKind::InvalidArgument,
              rec.sample_id + ": neither composite nor target image");
      const fs::path tgt = manifest.resolve(rec.target_image);
      out.pass1.push_back({relative_to(tgt, out_dir), detect, client::detections_to_text(rec.ground_truth)});
      if (!rec.ground_truth.empty()) target = read_png(tgt);
    }
    for (std::size_t k = 0; k < rec.ground_truth.size(); ++k) {
      const auto& gt = rec.ground_truth[k];
      const auto crop = crop_with_margin(target, gt.bbox(), margin_frac);
      const fs::path rel = fs::path("crops") / rec.sample_id / (std::to_string(k) + ".png");
      write_png(out_dir / rel, crop.image);
      out.pass2.push_back({rel.generic_string(), classify, gt.label()});
    }
  }
  return out;
}

FinetuneExport write_finetune_export(const Manifest& manifest, const AnomalyVocabulary& vocab,
                                     const synth::PromptStyle& style, double margin_frac,
                                     const fs::path& out_dir) {
  auto out = export_finetune_records(manifest, vocab, style, margin_frac, out_dir);
  std::vector<Json> rows1, rows2;
  for (const auto& r : out.pass1) rows1.push_back(to_json(r));
  for (const auto& r : out.pass2) rows2.push_back(to_json(r));
  write_jsonl(out_dir / "pass1.jsonl", rows1);
  write_jsonl(out_dir / "pass2.jsonl", rows2);
  return out;
}

}  // namespace pairscan::twopass
