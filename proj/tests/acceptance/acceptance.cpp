// Acceptance criteria. Prints one PASS/FAIL line per criterion; exit status
// is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "commands.hpp"
#include "pairscan/align/compose.hpp"
#include "pairscan/align/estimation.hpp"
#include "pairscan/client/mock_oracle.hpp"
#include "pairscan/error.hpp"
#include "pairscan/eval/report.hpp"
#include "pairscan/image_io.hpp"
#include "pairscan/synth/prompt.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace pairscan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0 = none
  std::function<Outcome(const fs::path&)> run;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

fs::path fresh_dir(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(std::vector<std::string> args) { return cli::run(args); }

void require_ok(int code, const std::string& what) {
  if (code != 0) fail(ErrorKind::Io, what + " exited with " + std::to_string(code));
}

// ------------------------------------------------------------ fixtures on disk

const std::vector<std::string> kObjectLabels{"tools", "gloves", "helmets", "traffic cones", "empty cans"};

// objects.jsonl + destinations.txt for the synth command.
void write_synth_inputs(const fs::path& dir, int dest_w, int dest_h, std::size_t n_dests) {
  fs::create_directories(dir / "objects");
  fs::create_directories(dir / "dest");
  std::vector<Json> rows;
  for (std::size_t i = 0; i < kObjectLabels.size(); ++i) {
    const int w = 20 + static_cast<int>(i) * 4, h = 28 - static_cast<int>(i) * 2;
    const auto obj = fixtures::ellipse_object(w, h, 500 + i, kObjectLabels[i]);
    const std::string stem = "objects/o" + std::to_string(i);
    write_png(dir / (stem + ".png"), obj.source);
    write_png(dir / (stem + "_mask.png"), obj.mask);
    rows.push_back({{"image", stem + ".png"}, {"mask", stem + "_mask.png"}, {"label", kObjectLabels[i]}});
  }
  write_jsonl(dir / "objects.jsonl", rows);
  std::string list;
  for (std::size_t i = 0; i < n_dests; ++i) {
    const std::string name = "dest/d" + std::to_string(i) + ".png";
    write_png(dir / name, fixtures::smooth_texture(dest_w, dest_h, 900 + i, 3));
    list += name + "\n";
  }
  write_file_atomic(dir / "destinations.txt", list);
}

struct LoopResult {
  double macro_bbox_only = 0.0;
  double macro_bbox_label = 0.0;
  std::size_t n = 0;
  Json report;
};

// synth -> mock server -> infer -> eval, all through the command layer.
LoopResult closed_loop(const fs::path& dir, std::size_t n, const std::string& synth_toml,
                       const client::OracleNoise& noise, bool regenerate = true) {
  if (regenerate) {
    fresh_dir(dir);
    write_synth_inputs(dir / "inputs", 160, 120, 4);
    write_file_atomic(dir / "run.toml", synth_toml);
    require_ok(cli({"synth", "--config", (dir / "run.toml").string(), "--seed", "2024", "--objects",
                    (dir / "inputs/objects.jsonl").string(), "--destinations",
                    (dir / "inputs/destinations.txt").string(), "--out", (dir / "synth").string(), "-n",
                    std::to_string(n)}),
               "synth");
  }
  const fs::path manifest = dir / "synth/synth.jsonl";
  auto oracle = std::make_shared<const client::MockOracle>(load_manifest(manifest).records,
                                                           AnomalyVocabulary::defaults(), noise);
  client::MockServer server(oracle);
  const std::string tag = std::to_string(noise.seed);
  require_ok(cli({"infer", "--manifest", manifest.string(), "--endpoint", server.url(), "--out",
                  (dir / ("inference_" + tag + ".jsonl")).string(), "--workers", "4", "--max-in-flight", "4"}),
             "infer");
  server.stop();
  require_ok(cli({"eval", "--inference", (dir / ("inference_" + tag + ".jsonl")).string(), "--manifest",
                  manifest.string(), "--out", (dir / ("report_" + tag)).string()}),
             "eval");
  LoopResult out;
  out.report = Json::parse(read_text_file(dir / ("report_" + tag) / "report.json"));
  for (const auto& e : out.report) {
    if (e["filters"]["state_driven_excluded"] || e["filters"]["min_size_px"] != 0.0) continue;
    (e["condition"] == "bbox_only" ? out.macro_bbox_only : out.macro_bbox_label) = e["macro_f1"].get<double>();
    out.n = e["n_retained"].get<std::size_t>();
  }
  return out;
}

// ------------------------------------------------------------ criteria

Outcome c1_metric_oracle(const fs::path&) {
  Rng rng(derive_seed(1, "metric-oracle"));
  static const char* labels[] = {"tools", "gloves", "helmets"};
  const auto boxes = [&](std::size_t n) {
    std::vector<LabeledBox> out;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rng.uniform(0, 12), y = rng.uniform(0, 12);
      out.emplace_back(BBox(x, y, x + rng.uniform(6, 16), y + rng.uniform(6, 16)), labels[rng.integer(0, 2)]);
    }
    return out;
  };
  std::size_t mismatches = 0, instances = 0, nonzero = 0;
  for (int t = 0; t < 500; ++t) {
    const auto preds = boxes(rng.integer(0, 6));
    const auto gts = boxes(rng.integer(0, 6));
    const double thr = rng.uniform(0.1, 0.7);
    for (const auto v : eval::kConditions) {
      const eval::EvalCondition cond{v, thr};
      const auto m = eval::match_sample(preds, gts, cond);
      const auto expect = oracles::brute_force_tp(preds, gts, cond);
      mismatches += m.counts.tp != expect ? 1 : 0;
      nonzero += expect > 0 ? 1 : 0;
      ++instances;
    }
  }
  return {mismatches == 0, std::to_string(instances) + " matchings, " + std::to_string(mismatches) +
                               " mismatches vs exhaustive search (" + std::to_string(nonzero) + " with tp > 0)"};
}

Outcome c2_f1_formulas(const fs::path&) {
  const double f = eval::sample_f1({1, 1, 1}).f1;
  const std::vector<eval::SampleScore> s{{1.0}, {0.5}};
  const double m = eval::macro_f1(s).m;
  return {f == 0.5 && m == 0.75, "sample_f1(1,1,1) = " + fmt("%.17g", f) + ", macro[1.0, 0.5] = " + fmt("%.17g", m)};
}

// sqrt(mean(((|Hp - q| + |p - H^-1 q|) / 2)^2)), computed without the library.
double oracle_rms_ste(const Eigen::Matrix3d& h, const std::vector<align::Correspondence>& c) {
  const Eigen::Matrix3d inv = h.inverse();
  const auto map = [](const Eigen::Matrix3d& m, const Point2& p) {
    const Eigen::Vector3d v = m * Eigen::Vector3d(p.x, p.y, 1.0);
    return Point2{v.x() / v.z(), v.y() / v.z()};
  };
  double sum = 0.0;
  for (const auto& m : c) {
    const Point2 f = map(h, m.p_ref), b = map(inv, m.p_tgt);
    const double e = 0.5 * (std::hypot(f.x - m.p_tgt.x, f.y - m.p_tgt.y) + std::hypot(b.x - m.p_ref.x, b.y - m.p_ref.y));
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(c.size()));
}

Outcome c3_homography_recovery(const fs::path&) {
  constexpr int kW = 640, kH = 480;
  std::size_t good = 0, failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(3, static_cast<std::uint64_t>(trial)));
    const Homography truth = fixtures::random_homography(rng, kW, kH);
    auto c = fixtures::exact_correspondences(truth, rng, 50, kW, kH);
    std::vector<align::Correspondence> inliers;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i < 15) {
        c[i].p_tgt = {rng.uniform(0, kW - 1), rng.uniform(0, kH - 1)};
      } else {
        c[i].p_tgt = {c[i].p_tgt.x + rng.normal(0, 0.5), c[i].p_tgt.y + rng.normal(0, 0.5)};
        inliers.push_back(c[i]);
      }
    }
    rng.shuffle(std::span(c));
    align::RansacConfig cfg;
    cfg.seed = derive_seed(33, static_cast<std::uint64_t>(trial));
    try {
      const auto fit = align::estimate_homography_ransac(c, cfg);
      const double rms = oracle_rms_ste(fit.homography.matrix(), inliers);
      worst = std::max(worst, rms);
      good += rms <= 1.0 ? 1 : 0;
    } catch (const Error&) {
      ++failures;
    }
  }
  return {good >= 95, std::to_string(good) + " / 100 trials with RMS symmetric transfer error <= 1.0 px (worst " +
                          fmt("%.3f", worst) + " px, " + std::to_string(failures) + " estimator failures)"};
}

Outcome c4_warp_fidelity(const fs::path&) {
  constexpr int kW = 320, kH = 240;
  double worst = 1e9;
  bool all = true;
  for (int i = 0; i < 10; ++i) {
    Rng rng(derive_seed(4, static_cast<std::uint64_t>(i)));
    const RasterImage img = fixtures::smooth_texture(kW, kH, 40 + i, 3, 16.0);
    const Homography h = fixtures::random_homography(rng, kW, kH);
    const RasterImage fwd = align::warp_reference(img, h, kW, kH);
    const RasterImage back = align::warp_reference(fwd, h.inverse(), kW, kH);
    // interior: the pixel and its forward image both lie at least 2 px inside the frame
    double sse = 0.0;
    std::size_t n = 0;
    for (int y = 2; y < kH - 2; ++y) {
      for (int x = 2; x < kW - 2; ++x) {
        const Point2 q = h.apply({double(x), double(y)});
        if (q.x < 2 || q.y < 2 || q.x > kW - 3 || q.y > kH - 3) continue;
        for (int c = 0; c < 3; ++c) {
          const double d = double(img.at(x, y, c)) - back.at(x, y, c);
          sse += d * d;
          ++n;
        }
      }
    }
    const double psnr = sse == 0.0 ? 99.0 : 10.0 * std::log10(255.0 * 255.0 * n / sse);
    worst = std::min(worst, psnr);
    all = all && psnr >= 30.0 && n > 0;
  }
  return {all, "minimum interior PSNR over 10 images " + fmt("%.2f", worst) + " dB"};
}

Outcome c5_perfect_loop(const fs::path& dir) {
  const auto r = closed_loop(dir, 100, "[synth]\nmax_objects = 3\n", client::OracleNoise{});
  return {r.n == 100 && r.macro_bbox_only == 1.0 && r.macro_bbox_label == 1.0,
          std::to_string(r.n) + " samples, macro bbox_only = " + fmt("%.17g", r.macro_bbox_only) +
              ", bbox_label = " + fmt("%.17g", r.macro_bbox_label)};
}

Outcome c6_known_noise(const fs::path& dir) {
  client::OracleNoise noise;
  noise.p_drop = 0.3;
  noise.seed = 6;
  const auto r = closed_loop(dir, 1000, "[synth]\nmin_objects = 1\nmax_objects = 1\n", noise);
  const bool ok = r.n == 1000 && std::abs(r.macro_bbox_only - 0.70) <= 0.05 && std::abs(r.macro_bbox_label - 0.70) <= 0.05;
  return {ok, std::to_string(r.n) + " samples, macro bbox_only = " + fmt("%.4f", r.macro_bbox_only) +
                  ", bbox_label = " + fmt("%.4f", r.macro_bbox_label) + " (target 0.70 +/- 0.05)"};
}

Outcome c7_condition_ordering(const fs::path& dir) {
  struct Setting {
    double drop, jitter, flip;
  };
  const std::vector<Setting> settings{{0.0, 0.0, 0.1}, {0.0, 0.0, 0.5}, {0.2, 0.0, 0.3},
                                      {0.0, 2.0, 0.2}, {0.3, 4.0, 0.7}, {0.0, 0.0, 1.0}};
  std::size_t runs = 0, violations = 0;
  std::string detail;
  bool first = true;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    for (std::uint64_t seed : {11u, 12u}) {
      client::OracleNoise noise{settings[s].drop, settings[s].jitter, settings[s].flip, seed * 100 + s};
      const auto r = closed_loop(dir, 80, "[synth]\nmax_objects = 3\n", noise, first);
      first = false;
      ++runs;
      if (r.macro_bbox_label > r.macro_bbox_only) ++violations;
      if (seed == 11u) {
        detail += " flip " + fmt("%.1f", settings[s].flip) + ": " + fmt("%.3f", r.macro_bbox_label) + " <= " +
                  fmt("%.3f", r.macro_bbox_only) + ";";
      }
    }
  }
  return {violations == 0, std::to_string(runs) + " runs, " + std::to_string(violations) + " violations;" + detail};
}

Outcome c8_filter_bookkeeping(const fs::path& dir) {
  fresh_dir(dir);
  const auto vocab = AnomalyVocabulary::defaults();
  Rng rng(8);
  std::vector<Json> manifest, inference;
  std::size_t state = 0;
  for (std::size_t i = 0; i < 1200; ++i) {
    const std::string id = "m" + std::to_string(i);
    Json gt = Json::array();
    if (i % 4 == 0 && state < 299) {
      gt.push_back({{"bbox", {10, 10, 60, 90}}, {"label", rng.bernoulli(0.5) ? "open doors" : "water leakage"}});
      ++state;
    }
    const std::size_t extra = rng.integer(0, 2);
    for (std::size_t k = 0; k < extra; ++k) {
      const double x = 100.0 * k;
      gt.push_back({{"bbox", {x, 5, x + 40, 45}}, {"label", vocab.labels()[rng.integer(0, 11)]}});
    }
    manifest.push_back({{"sample_id", id}, {"target_image", id + ".png"}, {"ground_truth", gt}});
    inference.push_back({{"sample_id", id}, {"detections", gt}});
  }
  write_jsonl(dir / "manifest.jsonl", manifest);
  write_jsonl(dir / "inference.jsonl", inference);
  const std::size_t expected_kept = 1200 - state;

  const Manifest m = load_manifest(dir / "manifest.jsonl");
  const auto outcome = eval::filter_samples(m.records, vocab, {true, 0.0, eval::SizeRule::AnyBox});

  require_ok(cli({"eval", "--inference", (dir / "inference.jsonl").string(), "--manifest",
                  (dir / "manifest.jsonl").string(), "--out", (dir / "report").string(), "--exclude-state-driven"}),
             "eval");
  std::string from_report;
  for (const auto& e : Json::parse(read_text_file(dir / "report/report.json"))) {
    if (e["filters"]["state_driven_excluded"] == true && e["filters"]["min_size_px"] == 0.0) {
      from_report = e["retained"].get<std::string>();
    }
  }
  const bool ok = state == 299 && expected_kept == 901 && outcome.fraction() == "901 / 1200" &&
                  from_report == "901 / 1200";
  return {ok, "state-driven samples " + std::to_string(state) + ", retained " + outcome.fraction() +
                  ", report says \"" + from_report + "\""};
}

Outcome c9_prompt_fidelity(const fs::path&) {
  synth::PromptStyle style = synth::PromptStyle::specific();
  style.templates.resize(1);
  style.shuffle_classes = false;
  const std::vector<std::string> classes{"apple", "book", "camera"};
  const std::string got = synth::build_prompt(style, classes, {}, 0, 0).text;
  const std::string expected =
      "Find the bounding boxes of objects that are present in the left image but missing in the right image: "
      "[apple, book, camera]";
  return {got == expected, "\"" + got + "\""};
}

Outcome c10_quartile_accounting(const fs::path&) {
  Rng rng(10);
  std::vector<SampleRecord> truth;
  std::size_t boxes = 0;
  for (std::size_t i = 0; boxes < 8000; ++i) {
    SampleRecord r;
    r.sample_id = "q" + std::to_string(i);
    r.target_image = r.sample_id + ".png";
    const std::size_t k = std::min<std::size_t>(rng.integer(1, 6), 8000 - boxes);
    for (std::size_t j = 0; j < k; ++j) {
      const double side = std::exp(rng.uniform(std::log(4.0), std::log(400.0)));
      const double x = 450.0 * j;
      r.ground_truth.emplace_back(BBox(x, 0, x + side, side * rng.uniform(0.5, 2.0)),
                                  kObjectLabels[rng.index(kObjectLabels.size())]);
    }
    boxes += k;
    truth.push_back(std::move(r));
  }
  const client::MockOracle oracle(truth, AnomalyVocabulary::defaults(), {});
  std::vector<std::vector<LabeledBox>> preds;
  for (const auto& r : truth) preds.push_back(oracle.detections_for(r));
  const std::vector<eval::SampleFilter> filters{{}};
  const auto result = eval::evaluate(truth, preds, AnomalyVocabulary::defaults(), filters);
  const auto& q = *result.rows[0].quartiles;
  double only = 0.0, label = 0.0;
  for (std::size_t b = 0; b < 4; ++b) {
    only += q.bbox_only[b];
    label += q.bbox_label[b];
  }
  return {q.total == 8000 && only == 1.0 && label == 1.0,
          std::to_string(q.total) + " boxes, agreement sums bbox_only = " + fmt("%.17g", only) +
              ", bbox_label = " + fmt("%.17g", label)};
}

// pair inputs: reference frames and targets shifted inside a larger scene
void write_pair_inputs(const fs::path& dir) {
  fs::create_directories(dir / "pair");
  std::vector<Json> rows;
  for (int i = 0; i < 4; ++i) {
    const RasterImage scene = fixtures::corner_scene(300, 230, 70 + i, 3, 80);
    const std::string id = "p" + std::to_string(i);
    write_png(dir / "pair" / (id + "_ref.png"), scene.crop(0, 0, 270, 200));
    write_png(dir / "pair" / (id + "_tgt.png"), scene.crop(5 + 3 * i, 4 + 2 * i, 270, 200));
    rows.push_back({{"sample_id", id},
                    {"target_image", "pair/" + id + "_tgt.png"},
                    {"reference_image", "pair/" + id + "_ref.png"},
                    {"ground_truth", {{{"bbox", {20, 30, 60, 70}}, {"label", "tools"}}}}});
  }
  write_jsonl(dir / "pairs_in.jsonl", rows);
}

void sweep_once(const fs::path& inputs, const fs::path& run) {
  fresh_dir(run);
  const std::string seed = "77";
  require_ok(cli({"pair", "--manifest", (inputs / "pairs_in.jsonl").string(), "--out", (run / "pair").string(),
                  "--seed", seed, "--workers", "3"}),
             "pair");
  require_ok(cli({"synth", "--seed", seed, "--objects", (inputs / "objects.jsonl").string(), "--destinations",
                  (inputs / "destinations.txt").string(), "--out", (run / "synth").string(), "-n", "30",
                  "--workers", "3"}),
             "synth");
  const fs::path port_file = run / "mock.port";
  int mock_status = -1;
  std::thread mock([&] {
    mock_status = cli({"mock-serve", "--manifest", (run / "synth/synth.jsonl").string(), "--seed", seed,
                       "--p-drop", "0.2", "--jitter", "1.5", "--p-flip", "0.3", "--port-file", port_file.string()});
  });
  for (int i = 0; i < 500 && !fs::exists(port_file); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  const std::string url = "http://127.0.0.1:" + trim(read_text_file(port_file));
  const int infer_status = cli({"infer", "--manifest", (run / "synth/synth.jsonl").string(), "--endpoint", url,
                                "--out", (run / "inference.jsonl").string(), "--workers", "4"});
  cli::request_stop();
  mock.join();
  fs::remove(port_file);  // the ephemeral port differs between runs
  require_ok(mock_status, "mock-serve");
  require_ok(infer_status, "infer");
  require_ok(cli({"eval", "--inference", (run / "inference.jsonl").string(), "--manifest",
                  (run / "synth/synth.jsonl").string(), "--out", (run / "report").string(), "--min-size", "20",
                  "--exclude-state-driven", "--workers", "3"}),
             "eval");
  require_ok(cli({"export-finetune", "--manifest", (run / "synth/synth.jsonl").string(), "--out",
                  (run / "export").string()}),
             "export-finetune");
  require_ok(cli({"report", "--report", (run / "report/report.json").string(), "--out", (run / "rerender").string()}),
             "report");
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
  }
  return files;
}

Outcome c11_determinism(const fs::path& dir) {
  fresh_dir(dir);
  write_synth_inputs(dir / "inputs", 128, 96, 3);
  write_pair_inputs(dir / "inputs");
  sweep_once(dir / "inputs", dir / "run_a");
  sweep_once(dir / "inputs", dir / "run_b");
  const auto a = snapshot(dir / "run_a"), b = snapshot(dir / "run_b");
  std::size_t differing = 0;
  std::string first_diff;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != bytes) {
      if (first_diff.empty()) first_diff = name;
      ++differing;
    }
  }
  const bool ok = a.size() == b.size() && differing == 0 && a.count("inference.jsonl") && a.count("pair/pairs.jsonl") &&
                  a.count("report/report.json") && a.count("export/pass2.jsonl") && a.count("synth/synth.jsonl");
  return {ok, std::to_string(a.size()) + " files across pair, synth, mock-serve, infer, eval, export-finetune, report; " +
                  std::to_string(differing) + " differ" + (first_diff.empty() ? "" : " (first: " + first_diff + ")")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "matching equals exhaustive maximum", 10.0, c1_metric_oracle},
      {2, "F1 and macro formulas", 0.0, c2_f1_formulas},
      {3, "homography recovery under noise and outliers", 30.0, c3_homography_recovery},
      {4, "warp round-trip fidelity", 0.0, c4_warp_fidelity},
      {5, "closed loop with a perfect oracle", 120.0, c5_perfect_loop},
      {6, "closed loop with known drop noise", 0.0, c6_known_noise},
      {7, "bbox_label never exceeds bbox_only", 0.0, c7_condition_ordering},
      {8, "state-driven filter retains 901 / 1200", 0.0, c8_filter_bookkeeping},
      {9, "prompt template byte equality", 0.0, c9_prompt_fidelity},
      {10, "quartile agreement sums to one", 0.0, c10_quartile_accounting},
      {11, "byte-identical reruns", 0.0, c11_determinism},
  };
  std::vector<int> only;
  fs::path work = fs::temp_directory_path() / "pairscan_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only.push_back(std::stoi(argv[++i]));
    } else if (a == "--work" && i + 1 < argc) {
      work = argv[++i];
    } else {
      std::cerr << "usage: pairscan_acceptance [--only N]... [--work DIR]\n";
      return 2;
    }
  }

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(work / ("c" + std::to_string(c.id)));
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail += "; exceeded " + fmt("%.0f", c.time_limit_s) + " s";
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << " ("
              << fmt("%.2f", secs) << " s)" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
