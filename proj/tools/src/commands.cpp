#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "pairscan/align/compose.hpp"
#include "pairscan/align/telemetry.hpp"
#include "pairscan/error.hpp"
#include "pairscan/eval/report.hpp"
#include "pairscan/image_io.hpp"
#include "pairscan/random.hpp"
#include "pairscan/twopass/finetune.hpp"
#include "pairscan/worker_pool.hpp"

namespace pairscan::cli {

namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_stop{false};

void log(const std::string& msg) { std::cerr << "pairscan: " << msg << "\n"; }

std::string relative_to(const fs::path& p, const fs::path& base) {
  return fs::absolute(p).lexically_normal().lexically_relative(fs::absolute(base).lexically_normal()).generic_string();
}

std::string file_stem_for(std::string_view id) {
  std::string out(id);
  for (auto& ch : out) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                    ch == '_' || ch == '.';
    if (!ok) ch = '_';
  }
  return out;
}

void report_manifest_errors(const Manifest& m) {
  for (const auto& e : m.errors) {
    log("manifest line " + std::to_string(e.line) + (e.sample_id.empty() ? "" : " (" + e.sample_id + ")") + ": " +
        e.message);
  }
}

// Options shared by every subcommand; flags override the TOML file.
struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> vocab;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "TOML run configuration")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "run seed");
    app->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--vocab", vocab, "vocabulary JSON {labels, state_driven}")->check(CLI::ExistingFile);
  }

  RunConfig load() const {
    RunConfig cfg = config.empty() ? RunConfig{} : load_run_config(config);
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (vocab) cfg.vocabulary = *vocab;
    return cfg;
  }
};

template <typename T>
void override_with(T& target, const std::optional<T>& flag) {
  if (flag) target = *flag;
}

// ---------------------------------------------------------------- pair

struct PairArgs {
  Common common;
  std::string manifest;
  std::string ref_pool;
  std::string correspondences;
  std::string out;
  std::optional<std::size_t> candidates;
  std::optional<double> threshold;
};

struct PairOutcome {
  std::optional<SampleRecord> record;
  std::string error;
};

// Imported matches: DIR/<sample>/<ref>.jsonl, or DIR/<sample>.jsonl when there is a single reference.
std::optional<fs::path> imported_matches(const fs::path& dir, const std::string& sample_id, const std::string& ref_id,
                                         std::size_t n_refs) {
  if (dir.empty()) return std::nullopt;
  const fs::path per_ref = dir / file_stem_for(sample_id) / (file_stem_for(ref_id) + ".jsonl");
  if (fs::exists(per_ref)) return per_ref;
  const fs::path per_sample = dir / (file_stem_for(sample_id) + ".jsonl");
  if (n_refs == 1 && fs::exists(per_sample)) return per_sample;
  return std::nullopt;
}

PairOutcome pair_one(const SampleRecord& in, const Manifest& manifest, const std::vector<align::PoolEntry>& pool,
                     const fs::path& pool_dir, const fs::path& matches_dir, const RunConfig& cfg,
                     const fs::path& out_dir) {
  PairOutcome out;
  try {
    const fs::path target_path = manifest.resolve(in.target_image);
    const RasterImage target = read_png(target_path);

    std::vector<std::pair<std::string, fs::path>> refs;
    if (!pool.empty() && in.target_telemetry) {
      const std::map<std::string, const align::PoolEntry*> by_id = [&] {
        std::map<std::string, const align::PoolEntry*> m;
        for (const auto& e : pool) m.emplace(e.ref_id, &e);
        return m;
      }();
      for (const auto& c : align::retrieve_candidates(in.target_telemetry, pool, cfg.candidates)) {
        const auto* e = by_id.at(c.ref_id);
        const fs::path p = fs::path(e->image).is_absolute() ? fs::path(e->image) : pool_dir / e->image;
        refs.emplace_back(c.ref_id, p);
      }
    } else if (!in.reference_image.empty()) {
      refs.emplace_back(in.reference_image, manifest.resolve(in.reference_image));
    } else {
      fail(ErrorKind::MissingTelemetry, "no telemetry for pool retrieval and no reference_image");
    }

    std::vector<RasterImage> images;
    std::vector<align::CandidateMatch> matches;
    for (const auto& [id, path] : refs) {
      images.push_back(read_png(path));
      align::CandidateMatch cm{id, std::nullopt};
      try {
        if (const auto file = imported_matches(matches_dir, in.sample_id, id, refs.size())) {
          cm.match = align::make_match_result(align::load_correspondences(*file));
        } else {
          cm.match = align::match_features(images.back(), target, cfg.matcher);
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientFeatures && e.kind() != ErrorKind::InvalidArgument) throw;
      }
      matches.push_back(std::move(cm));
    }
    const std::size_t best = align::select_reference(matches);
    align::RansacConfig rc = cfg.ransac;
    rc.seed = derive_seed(cfg.seed.value_or(0), in.sample_id);
    const auto fit = align::estimate_homography_ransac(matches[best].match->correspondences, rc);
    const RasterImage warped = align::warp_reference(images[best], fit.homography, target.width(), target.height());
    const RasterImage composite = align::compose_pair(target, warped);

    const std::string rel = "composites/" + file_stem_for(in.sample_id) + ".png";
    write_png(out_dir / rel, composite);

    SampleRecord rec = in;
    rec.target_image = relative_to(target_path, out_dir);
    rec.reference_image = relative_to(refs[best].second, out_dir);
    rec.pair = PairInfo{rel, fit.homography, matches[best].match->mean_distance, matches[best].ref_id};
    out.record = std::move(rec);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

int cmd_pair(const PairArgs& a) {
  RunConfig cfg = a.common.load();
  override_with(cfg.candidates, a.candidates);
  override_with(cfg.ransac.inlier_threshold, a.threshold);
  cfg.ransac.validate();
  const fs::path out_dir = a.out.empty() ? cfg.output_dir : fs::path(a.out);
  require(!out_dir.empty(), ErrorKind::InvalidArgument, "--out is required");

  const Manifest manifest = load_manifest(a.manifest);
  report_manifest_errors(manifest);
  std::vector<align::PoolEntry> pool;
  fs::path pool_dir;
  if (!a.ref_pool.empty()) {
    pool = align::load_reference_pool(a.ref_pool);
    pool_dir = fs::path(a.ref_pool).parent_path();
  }

  std::vector<PairOutcome> outcomes(manifest.records.size());
  parallel_for(manifest.records.size(), cfg.workers, [&](std::size_t i) {
    outcomes[i] = pair_one(manifest.records[i], manifest, pool, pool_dir, a.correspondences, cfg, out_dir);
  });

  std::vector<Json> rows, failures;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].record) {
      rows.push_back(to_json(*outcomes[i].record));
    } else {
      failures.push_back({{"sample_id", manifest.records[i].sample_id}, {"error", outcomes[i].error}});
      log(manifest.records[i].sample_id + ": " + outcomes[i].error);
    }
  }
  for (const auto& e : manifest.errors) {
    failures.push_back({{"sample_id", e.sample_id}, {"line", e.line}, {"error", e.message}});
  }
  write_jsonl(out_dir / "pairs.jsonl", rows);
  write_jsonl(out_dir / "failures.jsonl", failures);

  const std::size_t total = manifest.records.size() + manifest.errors.size();
  log("paired " + std::to_string(rows.size()) + " / " + std::to_string(total) + " samples");
  return failures.size() * 2 > total ? kExitData : kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  Common common;
  std::string objects;
  std::string destinations;
  std::string out;
  std::size_t n = 0;
};

std::vector<synth::MaskedObject> load_objects(const fs::path& path) {
  const auto rows = read_jsonl(path);
  const fs::path base = path.parent_path();
  std::vector<synth::MaskedObject> out;
  for (const auto& r : rows) {
    require(r.is_object() && r.contains("image") && r.contains("mask") && r.contains("label"), ErrorKind::Parse,
            "object rows need image, mask and label");
    out.push_back(synth::MaskedObject::make(read_png(base / r["image"].get<std::string>()),
                                            read_png(base / r["mask"].get<std::string>()),
                                            r["label"].get<std::string>()));
  }
  return out;
}

std::vector<RasterImage> load_destinations(const fs::path& path) {
  std::istringstream lines(read_text_file(path));
  const fs::path base = path.parent_path();
  std::vector<RasterImage> out;
  for (std::string line; std::getline(lines, line);) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(read_png(fs::path(line).is_absolute() ? fs::path(line) : base / line));
  }
  return out;
}

Json synth_row(const synth::SynthRecord& r) {
  const std::string stem = "images/" + r.sample_id;
  SampleRecord rec;
  rec.sample_id = r.sample_id;
  rec.target_image = stem + "_target.png";
  rec.reference_image = stem + "_reference.png";
  rec.ground_truth = r.injected;
  rec.pair = PairInfo{stem + "_composite.png", r.perturbation.inverse(), 0.0, ""};
  rec.extra = {{"prompt", r.prompt},
               {"prompt_classes", r.prompt_classes},
               {"dummy_classes", r.dummy_classes},
               {"destination_index", r.destination_index}};
  return to_json(rec);
}

int cmd_synth(const SynthArgs& a) {
  RunConfig cfg = a.common.load();
  require(cfg.seed.has_value(), ErrorKind::InvalidArgument, "synth requires --seed (or seed in the config)");
  const fs::path out_dir = a.out.empty() ? cfg.output_dir : fs::path(a.out);
  require(!out_dir.empty(), ErrorKind::InvalidArgument, "--out is required");
  cfg.synth.validate();

  std::vector<Json> rows;
  std::size_t warnings = 0;
  if (a.n > 0) {
    require(!a.objects.empty() && !a.destinations.empty(), ErrorKind::InvalidArgument,
            "--objects and --destinations are required when -n > 0");
    const auto objects = load_objects(a.objects);
    require(!objects.empty(), ErrorKind::InvalidArgument, "object manifest is empty");
    const auto dests = load_destinations(a.destinations);
    require(!dests.empty(), ErrorKind::InvalidArgument, "destination list is empty");

    std::vector<std::optional<Json>> slots(a.n);
    std::vector<std::vector<synth::SynthWarning>> slot_warnings(a.n);
    parallel_for(a.n, cfg.workers, [&](std::size_t i) {
      auto rec = synth::generate_synth_record(i, dests, objects, cfg.synth, *cfg.seed, slot_warnings[i]);
      if (!rec) return;
      const fs::path stem = out_dir / "images" / rec->sample_id;
      write_png(stem.string() + "_target.png", rec->target);
      write_png(stem.string() + "_reference.png", rec->reference);
      write_png(stem.string() + "_composite.png", rec->composite);
      slots[i] = synth_row(*rec);
    });
    for (std::size_t i = 0; i < a.n; ++i) {
      if (slots[i]) rows.push_back(std::move(*slots[i]));
      for (const auto& w : slot_warnings[i]) {
        log("synth record " + std::to_string(w.record_index) + ": " + w.message);
        ++warnings;
      }
    }
  }
  write_jsonl(out_dir / "synth.jsonl", rows);
  log("wrote " + std::to_string(rows.size()) + " records, " + std::to_string(warnings) + " warnings");
  return kExitOk;
}

// ---------------------------------------------------------------- infer

struct InferArgs {
  Common common;
  std::string manifest;
  std::string out;
  std::optional<std::string> endpoint;
  std::optional<std::size_t> max_in_flight;
  std::optional<std::int64_t> timeout_ms;
  std::optional<double> margin;
  std::optional<std::string> style;
  bool single_pass = false;
};

int cmd_infer(const InferArgs& a) {
  RunConfig cfg = a.common.load();
  override_with(cfg.client.endpoint, a.endpoint);
  override_with(cfg.client.max_in_flight, a.max_in_flight);
  if (a.timeout_ms) cfg.client.timeout = std::chrono::milliseconds(*a.timeout_ms);
  override_with(cfg.infer.margin_frac, a.margin);
  if (a.style) cfg.infer.style = *a.style == "abstract" ? synth::PromptStyle::abstract() : synth::PromptStyle::specific();
  if (a.single_pass) cfg.infer.single_pass = true;
  if (const char* token = std::getenv(kTokenEnv); token && *token) cfg.client.bearer_token = std::string(token);
  cfg.infer.workers = cfg.workers;
  fs::path out = a.out.empty() ? cfg.output_dir / "inference.jsonl" : fs::path(a.out);

  const auto vocab = cfg.load_vocabulary();
  const Manifest manifest = load_manifest(a.manifest);
  report_manifest_errors(manifest);
  client::HttpModelClient client(cfg.client);
  const auto run = twopass::infer_manifest(manifest, vocab, cfg.infer, client);

  std::vector<Json> rows;
  std::size_t failed = 0, endpoint_failed = 0;
  for (const auto& r : run.results) {
    rows.push_back(twopass::to_json(r));
    if (r.error) {
      ++failed;
      endpoint_failed += r.endpoint_failure ? 1 : 0;
      log(r.sample_id + ": " + *r.error);
    }
  }
  write_jsonl(out, rows);
  log("inferred " + std::to_string(rows.size() - failed) + " / " + std::to_string(rows.size()) + " samples");
  if (run.aborted) {
    log("aborted after " + std::to_string(twopass::kAbortAfterConsecutiveFailures) +
        " consecutive endpoint failures");
    return kExitEndpoint;
  }
  if (!rows.empty() && endpoint_failed == rows.size()) return kExitEndpoint;
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  Common common;
  std::string inference;
  std::string manifest;
  std::string out;
  std::vector<double> min_sizes;
  bool exclude_state_driven = false;
  std::optional<std::string> size_rule;
  std::optional<double> iou;
};

int cmd_eval(const EvalArgs& a) {
  RunConfig cfg = a.common.load();
  if (!a.min_sizes.empty()) cfg.min_sizes = a.min_sizes;
  if (a.exclude_state_driven) cfg.exclude_state_driven = true;
  if (a.size_rule) cfg.size_rule = *a.size_rule == "all" ? eval::SizeRule::AllBoxes : eval::SizeRule::AnyBox;
  override_with(cfg.iou_threshold, a.iou);
  const fs::path out_dir = a.out.empty() ? cfg.output_dir : fs::path(a.out);
  require(!out_dir.empty(), ErrorKind::InvalidArgument, "--out is required");

  const auto vocab = cfg.load_vocabulary();
  const Manifest manifest = load_manifest(a.manifest);
  report_manifest_errors(manifest);

  std::map<std::string, std::vector<LabeledBox>> predicted;
  std::vector<std::string> orphans;
  for (const auto& row : read_jsonl(a.inference)) {
    require(row.is_object() && row.contains("sample_id") && row["sample_id"].is_string(), ErrorKind::Parse,
            "inference rows need a sample_id");
    const auto id = row["sample_id"].get<std::string>();
    if (!predicted.emplace(id, twopass::detections_from_json(row)).second) {
      fail(ErrorKind::IdMismatch, "duplicate inference row for " + id);
    }
  }
  std::set<std::string> manifest_ids;
  std::vector<std::vector<LabeledBox>> preds;
  for (const auto& r : manifest.records) {
    manifest_ids.insert(r.sample_id);
    const auto it = predicted.find(r.sample_id);
    if (it == predicted.end()) {
      orphans.push_back(r.sample_id + " (no inference row)");
    } else {
      preds.push_back(it->second);
    }
  }
  for (const auto& [id, _] : predicted) {
    if (!manifest_ids.count(id)) orphans.push_back(id + " (not in manifest)");
  }
  if (!orphans.empty()) {
    for (const auto& o : orphans) std::cout << "orphan: " << o << "\n";
    fail(ErrorKind::IdMismatch, std::to_string(orphans.size()) + " sample ids do not align");
  }

  std::vector<double> sizes{0.0};
  for (const double s : cfg.min_sizes) {
    require(s >= 0.0, ErrorKind::InvalidArgument, "--min-size must be >= 0");
    sizes.push_back(s);
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<eval::SampleFilter> filters;
  for (const bool sd : cfg.exclude_state_driven ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
    for (const double s : sizes) filters.push_back({sd, s, cfg.size_rule});
  }

  const auto result = eval::evaluate(manifest.records, preds, vocab, filters, cfg.iou_threshold, cfg.workers);
  const Json report = eval::report_json(result);
  eval::write_report_files(report, out_dir);
  std::cout << eval::report_table(report);
  return kExitOk;
}

// ---------------------------------------------------------------- export-finetune

struct ExportArgs {
  Common common;
  std::string manifest;
  std::string out;
  std::optional<double> margin;
};

int cmd_export(const ExportArgs& a) {
  RunConfig cfg = a.common.load();
  override_with(cfg.infer.margin_frac, a.margin);
  const fs::path out_dir = a.out.empty() ? cfg.output_dir : fs::path(a.out);
  require(!out_dir.empty(), ErrorKind::InvalidArgument, "--out is required");
  const Manifest manifest = load_manifest(a.manifest);
  report_manifest_errors(manifest);
  const auto out = twopass::write_finetune_export(manifest, cfg.load_vocabulary(), cfg.infer.style,
                                                  cfg.infer.margin_frac, out_dir);
  log("exported " + std::to_string(out.pass1.size()) + " pass-1 and " + std::to_string(out.pass2.size()) +
      " pass-2 records");
  return kExitOk;
}

// ---------------------------------------------------------------- mock-serve

struct MockArgs {
  Common common;
  std::string manifest;
  std::optional<std::string> host;
  std::optional<int> port;
  std::string port_file;
  std::optional<double> p_drop;
  std::optional<double> jitter;
  std::optional<double> p_flip;
  int delay_ms = 0;
};

int cmd_mock_serve(const MockArgs& a) {
  RunConfig cfg = a.common.load();
  require(cfg.seed.has_value(), ErrorKind::InvalidArgument, "mock-serve requires --seed (or seed in the config)");
  override_with(cfg.mock_host, a.host);
  override_with(cfg.mock_port, a.port);
  override_with(cfg.noise.p_drop, a.p_drop);
  override_with(cfg.noise.jitter_sigma, a.jitter);
  override_with(cfg.noise.p_label_flip, a.p_flip);
  cfg.noise.seed = *cfg.seed;

  Manifest manifest = load_manifest(a.manifest);
  report_manifest_errors(manifest);
  auto oracle = std::make_shared<const client::MockOracle>(std::move(manifest.records), cfg.load_vocabulary(),
                                                           cfg.noise);
  g_stop = false;
  client::MockServer server(oracle, cfg.mock_host, cfg.mock_port, std::chrono::milliseconds(a.delay_ms));
  if (!a.port_file.empty()) write_file_atomic(a.port_file, std::to_string(server.port()) + "\n");
  std::cout << "listening on " << server.url() << std::endl;
  while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
  server.stop();
  log("served " + std::to_string(server.requests()) + " requests, max in flight " +
      std::to_string(server.max_in_flight()));
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string report;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  const Json report = Json::parse(read_text_file(a.report), nullptr, false);
  require(!report.is_discarded(), ErrorKind::Parse, a.report + " is not valid JSON");
  const fs::path out_dir = a.out.empty() ? fs::path(a.report).parent_path() : fs::path(a.out);
  write_file_atomic(out_dir / "report.csv", eval::report_csv(report));
  write_file_atomic(out_dir / "quartile_agreement.svg", eval::quartile_svg(report));
  write_file_atomic(out_dir / "size_distribution.svg", eval::size_distribution_svg(report));
  std::cout << eval::report_table(report);
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  if (is_endpoint_error(kind)) return kExitEndpoint;
  if (kind == ErrorKind::InvalidArgument) return kExitUsage;
  return kExitData;
}

}  // namespace

void request_stop() noexcept { g_stop = true; }

int run(const std::vector<std::string>& args) {
  CLI::App app{"Telemetry-aligned image-pair anomaly detection with a vision-language model", "pairscan"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pairscan 0.1.0");

  PairArgs pair;
  auto* pc = app.add_subcommand("pair", "build aligned target|reference composites");
  pair.common.attach(pc);
  pc->add_option("--manifest", pair.manifest, "sample manifest (JSONL)")->required()->check(CLI::ExistingFile);
  pc->add_option("--ref-pool", pair.ref_pool, "reference pool (JSONL)")->check(CLI::ExistingFile);
  pc->add_option("--correspondences", pair.correspondences, "directory of imported matches (JSONL)")
      ->check(CLI::ExistingDirectory);
  pc->add_option("--out", pair.out, "output directory");
  pc->add_option("--candidates", pair.candidates, "telemetry candidates per sample")->check(CLI::PositiveNumber);
  pc->add_option("--ransac-threshold", pair.threshold, "inlier threshold in pixels")->check(CLI::PositiveNumber);

  SynthArgs syn;
  auto* sc = app.add_subcommand("synth", "generate cut-paste training pairs");
  syn.common.attach(sc);
  sc->add_option("--objects", syn.objects, "masked objects (JSONL {image, mask, label})");
  sc->add_option("--destinations", syn.destinations, "text file with one destination image per line");
  sc->add_option("--out", syn.out, "output directory");
  sc->add_option("-n,--count", syn.n, "number of records")->required();

  InferArgs inf;
  auto* ic = app.add_subcommand("infer", "two-pass inference against a model endpoint");
  inf.common.attach(ic);
  ic->add_option("--manifest", inf.manifest, "pair manifest (JSONL)")->required()->check(CLI::ExistingFile);
  ic->add_option("--out", inf.out, "inference JSONL path");
  ic->add_option("--endpoint", inf.endpoint, "model endpoint URL");
  ic->add_option("--max-in-flight", inf.max_in_flight, "concurrent requests")->check(CLI::PositiveNumber);
  ic->add_option("--timeout-ms", inf.timeout_ms, "per-request timeout")->check(CLI::PositiveNumber);
  ic->add_option("--margin", inf.margin, "pass-2 crop margin fraction")->check(CLI::Range(0.0, 1.0));
  ic->add_option("--style", inf.style, "prompt style")->check(CLI::IsMember({"specific", "abstract"}));
  ic->add_flag("--single-pass", inf.single_pass, "skip pass-2 relabelling");

  EvalArgs ev;
  auto* ec = app.add_subcommand("eval", "score inference against ground truth");
  ev.common.attach(ec);
  ec->add_option("--inference", ev.inference, "inference JSONL")->required()->check(CLI::ExistingFile);
  ec->add_option("--manifest", ev.manifest, "pair manifest (JSONL)")->required()->check(CLI::ExistingFile);
  ec->add_option("--out", ev.out, "report directory");
  ec->add_option("--min-size", ev.min_sizes, "size thresholds in px (repeatable)");
  ec->add_flag("--exclude-state-driven", ev.exclude_state_driven, "add rows without state-driven samples");
  ec->add_option("--size-rule", ev.size_rule, "drop samples with any / all boxes under the threshold")
      ->check(CLI::IsMember({"any", "all"}));
  ec->add_option("--iou", ev.iou, "IoU threshold")->check(CLI::Range(0.0, 1.0));

  ExportArgs ex;
  auto* xc = app.add_subcommand("export-finetune", "write pass-1 and pass-2 fine-tuning records");
  ex.common.attach(xc);
  xc->add_option("--manifest", ex.manifest, "pair or synth manifest (JSONL)")->required()->check(CLI::ExistingFile);
  xc->add_option("--out", ex.out, "output directory");
  xc->add_option("--margin", ex.margin, "crop margin fraction")->check(CLI::Range(0.0, 1.0));

  MockArgs mk;
  auto* mc = app.add_subcommand("mock-serve", "serve a ground-truth oracle over the model protocol");
  mk.common.attach(mc);
  mc->add_option("--manifest", mk.manifest, "manifest with ground truth")->required()->check(CLI::ExistingFile);
  mc->add_option("--host", mk.host, "bind address");
  mc->add_option("--port", mk.port, "port, 0 for an ephemeral one");
  mc->add_option("--port-file", mk.port_file, "write the bound port here");
  mc->add_option("--p-drop", mk.p_drop, "probability of dropping a box");
  mc->add_option("--jitter", mk.jitter, "corner jitter sigma in px");
  mc->add_option("--p-flip", mk.p_flip, "probability of a wrong label");
  mc->add_option("--delay-ms", mk.delay_ms, "artificial latency per request")->check(CLI::NonNegativeNumber);

  ReportArgs rp;
  auto* rc = app.add_subcommand("report", "re-render CSV, SVG and a table from report.json");
  rc->add_option("--report", rp.report, "report.json")->required()->check(CLI::ExistingFile);
  rc->add_option("--out", rp.out, "output directory (default: next to report.json)");

  std::vector<std::string> argv_store{"pairscan"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (pc->parsed()) return cmd_pair(pair);
    if (sc->parsed()) return cmd_synth(syn);
    if (ic->parsed()) return cmd_infer(inf);
    if (ec->parsed()) return cmd_eval(ev);
    if (xc->parsed()) return cmd_export(ex);
    if (mc->parsed()) return cmd_mock_serve(mk);
    if (rc->parsed()) return cmd_report(rp);
  } catch (const Error& e) {
    log(e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    log(e.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pairscan::cli
