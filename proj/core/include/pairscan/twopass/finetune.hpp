#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pairscan/records.hpp"
#include "pairscan/synth/prompt.hpp"
#include "pairscan/vocabulary.hpp"

namespace pairscan::twopass {

struct FinetuneRecord {
  std::string image;  // relative to the export directory
  std::string prompt;
  std::string answer;
};

Json to_json(const FinetuneRecord& r);

struct FinetuneExport {
  std::vector<FinetuneRecord> pass1;
  std::vector<FinetuneRecord> pass2;
};

/// Pass-1 records pair each composite with the detection prompt and the GT
/// in the detection output grammar. Pass-2 records pair each GT crop
/// (written to crops/<sample_id>/<box_index>.png under out_dir) with the
/// classification prompt and the GT label. Crops come from the target half
/// of the composite, or the target image when no composite exists.
FinetuneExport export_finetune_records(const Manifest& manifest, const AnomalyVocabulary& vocab,
                                       const synth::PromptStyle& style, double margin_frac,
                                       const std::filesystem::path& out_dir);

/// export_finetune_records plus pass1.jsonl and pass2.jsonl in out_dir.
FinetuneExport write_finetune_export(const Manifest& manifest, const AnomalyVocabulary& vocab,
                                     const synth::PromptStyle& style, double margin_frac,
                                     const std::filesystem::path& out_dir);

}  // namespace pairscan::twopass
