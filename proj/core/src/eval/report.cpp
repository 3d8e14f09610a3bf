#include "pairscan/eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pairscan/error.hpp"
#include "pairscan/worker_pool.hpp"

namespace pairscan::eval {

EvaluationResult evaluate(std::span<const SampleRecord> truth,
                          std::span<const std::vector<LabeledBox>> predictions,
                          const AnomalyVocabulary& vocab, std::span<const SampleFilter> filters,
                          double iou_threshold, std::size_t workers) {
  require(truth.size() == predictions.size(), ErrorKind::IdMismatch,
          "prediction count differs from ground-truth count");
  EvaluationResult out;
  out.iou_threshold = iou_threshold;
  out.samples.resize(truth.size());
  parallel_for(truth.size(), workers, [&](std::size_t i) {
    auto& s = out.samples[i];
    s.sample_id = truth[i].sample_id;
    for (std::size_t c = 0; c < kConditions.size(); ++c) {
      s.match[c] = match_sample(predictions[i], truth[i].ground_truth, {kConditions[c], iou_threshold});
      s.f1[c] = sample_f1(s.match[c].counts).f1;
    }
  });

  for (const auto& f : filters) {
    FilteredResult row{f, filter_samples(truth, vocab, f), {}, std::nullopt};
    if (!row.outcome.retained.empty()) {
      for (std::size_t c = 0; c < kConditions.size(); ++c) {
        std::vector<SampleScore> scores;
        for (const auto i : row.outcome.retained) scores.push_back({out.samples[i].f1[c]});
        row.macro[c] = macro_f1(scores);
      }
    }
    std::vector<GtOutcome> boxes;
    for (const auto i : row.outcome.retained) {
      const auto& gts = truth[i].ground_truth;
      const auto first = boxes.size();
      for (const auto& g : gts) boxes.push_back({geo_mean_size(g.bbox()), false, false});
      for (const auto& p : out.samples[i].match[0].pairs) boxes[first + p.gt].matched_bbox_only = true;
      for (const auto& p : out.samples[i].match[1].pairs) boxes[first + p.gt].matched_bbox_label = true;
    }
    if (boxes.size() >= 4) row.quartiles = quartile_agreement(std::move(boxes));
    out.rows.push_back(std::move(row));
  }
  return out;
}

Json report_json(const EvaluationResult& result) {
  Json report = Json::array();
  for (const auto& row : result.rows) {
    for (std::size_t c = 0; c < kConditions.size(); ++c) {
      Json samples = Json::array();
      for (const auto i : row.outcome.retained) {
        const auto& s = result.samples[i];
        Json matches = Json::array();
        for (const auto& p : s.match[c].pairs) matches.push_back({{"pred", p.pred}, {"gt", p.gt}, {"iou", p.iou}});
        samples.push_back({{"sample_id", s.sample_id},
                           {"tp", s.match[c].counts.tp},
                           {"fp", s.match[c].counts.fp},
                           {"fn", s.match[c].counts.fn},
                           {"f1", s.f1[c]},
                           {"matches", std::move(matches)}});
      }
      Json quartiles = nullptr;
      if (row.quartiles) {
        const auto& q = *row.quartiles;
        Json ranges = Json::array();
        for (const auto& [lo, hi] : q.size_range) ranges.push_back({lo, hi});
        quartiles = {{"agreement", c == 0 ? q.bbox_only : q.bbox_label},
                     {"counts", q.counts},
                     {"size_range", std::move(ranges)},
                     {"total", q.total}};
      }
      Json entry{{"condition", to_string(kConditions[c])},
                 {"iou_threshold", result.iou_threshold},
                 {"filters",
                  {{"state_driven_excluded", row.filter.exclude_state_driven},
                   {"min_size_px", row.filter.min_size_px},
                   {"size_rule", to_string(row.filter.rule)}}},
                 {"n_retained", row.outcome.retained.size()},
                 {"n_total", row.outcome.total},
                 {"retained", row.outcome.fraction()},
                 {"macro_f1", row.macro[c] ? Json(row.macro[c]->m) : Json(nullptr)},
                 {"quartiles", std::move(quartiles)},
                 {"samples", std::move(samples)}};
      report.push_back(std::move(entry));
    }
  }
  return report;
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

void check_report(const Json& report) {
  require(report.is_array(), ErrorKind::Parse, "report must be a JSON array");
  for (const auto& e : report) {
    require(e.is_object() && e.contains("condition") && e.contains("filters") && e.contains("macro_f1") &&
                e.contains("n_retained") && e.contains("n_total"),
            ErrorKind::Parse, "report entry lacks required fields");
  }
}

const Json* first_entry(const Json& report, std::string_view condition) {
  for (const auto& e : report) {
    if (e["condition"] == condition) return &e;
  }
  return nullptr;
}

std::string svg_open(int w, int h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
         std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string svg_text(double x, double y, const std::string& text, const char* anchor = "middle") {
  return "<text x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y) + "\" text-anchor=\"" + anchor + "\">" +
         text + "</text>\n";
}

std::string svg_rect(double x, double y, double w, double h, const char* fill) {
  return "<rect x=\"" + fmt("%.1f", x) + "\" y=\"" + fmt("%.1f", y) + "\" width=\"" + fmt("%.1f", w) +
         "\" height=\"" + fmt("%.1f", h) + "\" fill=\"" + fill + "\"/>\n";
}

constexpr int kWidth = 520;
constexpr int kHeight = 320;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

struct Axis {
  double max;
  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  double y(double v) const { return kTop + plot_h * (1.0 - v / max); }
};

std::string axis_lines(const Axis& ax, const char* tick_fmt) {
  std::string out;
  for (int t = 0; t <= 4; ++t) {
    const double v = ax.max * t / 4.0;
    out += "<line x1=\"" + fmt("%.1f", kLeft) + "\" y1=\"" + fmt("%.1f", ax.y(v)) + "\" x2=\"" +
           fmt("%.1f", kLeft + ax.plot_w) + "\" y2=\"" + fmt("%.1f", ax.y(v)) + "\" stroke=\"#ddd\"/>\n";
    out += svg_text(kLeft - 6, ax.y(v) + 4, fmt(tick_fmt, v), "end");
  }
  return out;
}

std::string no_data_svg(const std::string& title) {
  return svg_open(kWidth, kHeight) + svg_text(kWidth / 2.0, 24, title) +
         svg_text(kWidth / 2.0, kHeight / 2.0, "fewer than 4 ground-truth boxes") + "</svg>\n";
}

std::string filter_caption(const Json& e) {
  const auto& f = e["filters"];
  std::string s = f.value("state_driven_excluded", false) ? "state-driven excluded" : "all labels";
  s += ", min size " + fmt("%g", f.value("min_size_px", 0.0)) + " px, " + e.value("retained", std::string());
  return s;
}

}  // namespace

std::string report_csv(const Json& report) {
  check_report(report);
  std::string out = "condition,state_excluded,min_size_px,n_retained,n_total,macro_f1\n";
  for (const auto& e : report) {
    if (e["macro_f1"].is_null()) continue;
    const auto& f = e["filters"];
    out += e["condition"].get<std::string>() + "," +
           (f.value("state_driven_excluded", false) ? "true" : "false") + "," +
           fmt("%g", f.value("min_size_px", 0.0)) + "," + std::to_string(e["n_retained"].get<std::size_t>()) +
           "," + std::to_string(e["n_total"].get<std::size_t>()) + "," +
           fmt("%.6f", e["macro_f1"].get<double>()) + "\n";
  }
  return out;
}

std::string report_table(const Json& report) {
  check_report(report);
  std::string out = "| state-driven | min size (px) | retained | bbox only | bbox + label |\n"
                    "|---|---|---|---|---|\n";
  for (std::size_t i = 0; i + 1 < report.size(); i += 2) {
    const auto& a = report[i];
    const auto& b = report[i + 1];
    const auto& f = a["filters"];
    const auto score = [](const Json& e) {
      return e["macro_f1"].is_null() ? std::string("n/a") : fmt("%.3f", e["macro_f1"].get<double>());
    };
    out += std::string("| ") + (f.value("state_driven_excluded", false) ? "excluded" : "included") + " | " +
           fmt("%g", f.value("min_size_px", 0.0)) + " | " + a.value("retained", std::string()) + " | " +
           score(a) + " | " + score(b) + " |\n";
  }
  return out;
}

std::string quartile_svg(const Json& report) {
  check_report(report);
  const std::string title = "Agreement rate per size quartile";
  const Json* only = first_entry(report, "bbox_only");
  const Json* label = first_entry(report, "bbox_label");
  if (!only || !label || (*only)["quartiles"].is_null() || (*label)["quartiles"].is_null()) {
    return no_data_svg(title);
  }
  const auto a = (*only)["quartiles"]["agreement"].get<std::vector<double>>();
  const auto b = (*label)["quartiles"]["agreement"].get<std::vector<double>>();
  double peak = 0.0;
  for (std::size_t i = 0; i < 4; ++i) peak = std::max({peak, a[i], b[i]});
  Axis ax{std::max(0.1, std::ceil(peak * 20.0) / 20.0)};

  std::string out = svg_open(kWidth, kHeight) + svg_text(kWidth / 2.0, 20, title) +
                    svg_text(kWidth / 2.0, 34, filter_caption(*only)) + axis_lines(ax, "%.3f");
  const double group = ax.plot_w / 4.0;
  const double bar = group * 0.35;
  for (std::size_t q = 0; q < 4; ++q) {
    const double x0 = kLeft + group * static_cast<double>(q) + group * 0.15;
    out += svg_rect(x0, ax.y(a[q]), bar, ax.y(0) - ax.y(a[q]), "#4c72b0");
    out += svg_rect(x0 + bar, ax.y(b[q]), bar, ax.y(0) - ax.y(b[q]), "#dd8452");
    out += svg_text(x0 + bar / 2, ax.y(a[q]) - 4, fmt("%.3f", a[q]));
    out += svg_text(x0 + 1.5 * bar, ax.y(b[q]) - 4, fmt("%.3f", b[q]));
    out += svg_text(x0 + bar, kHeight - kBottom + 16, "Q" + std::to_string(q + 1));
  }
  out += svg_rect(kLeft, kHeight - 22, 10, 10, "#4c72b0") + svg_text(kLeft + 14, kHeight - 13, "bbox only", "start");
  out += svg_rect(kLeft + 120, kHeight - 22, 10, 10, "#dd8452") +
         svg_text(kLeft + 134, kHeight - 13, "bbox + label", "start");
  out += "</svg>\n";
  return out;
}

std::string size_distribution_svg(const Json& report) {
  check_report(report);
  const std::string title = "Ground-truth boxes per size quartile";
  const Json* only = first_entry(report, "bbox_only");
  if (!only || (*only)["quartiles"].is_null()) return no_data_svg(title);
  const auto& q = (*only)["quartiles"];
  const auto counts = q["counts"].get<std::vector<std::size_t>>();
  const auto ranges = q["size_range"].get<std::vector<std::vector<double>>>();
  const double peak = static_cast<double>(*std::max_element(counts.begin(), counts.end()));
  Axis ax{std::max(1.0, peak)};

  std::string out = svg_open(kWidth, kHeight) + svg_text(kWidth / 2.0, 20, title) +
                    svg_text(kWidth / 2.0, 34, filter_caption(*only)) + axis_lines(ax, "%.0f");
  const double group = ax.plot_w / 4.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double v = static_cast<double>(counts[i]);
    const double x0 = kLeft + group * static_cast<double>(i) + group * 0.2;
    out += svg_rect(x0, ax.y(v), group * 0.6, ax.y(0) - ax.y(v), "#55a868");
    out += svg_text(x0 + group * 0.3, ax.y(v) - 4, std::to_string(counts[i]));
    out += svg_text(x0 + group * 0.3, kHeight - kBottom + 16, "Q" + std::to_string(i + 1));
    out += svg_text(x0 + group * 0.3, kHeight - kBottom + 30,
                    fmt("%.1f", ranges[i][0]) + "-" + fmt("%.1f", ranges[i][1]) + " px");
  }
  out += "</svg>\n";
  return out;
}

void write_report_files(const Json& report, const std::filesystem::path& out_dir) {
  write_file_atomic(out_dir / "report.json", report.dump(2) + "\n");
  write_file_atomic(out_dir / "report.csv", report_csv(report));
  write_file_atomic(out_dir / "quartile_agreement.svg", quartile_svg(report));
  write_file_atomic(out_dir / "size_distribution.svg", size_distribution_svg(report));
}

}  // namespace pairscan::eval
