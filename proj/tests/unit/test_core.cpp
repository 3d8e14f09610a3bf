#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "pairscan/error.hpp"
#include "pairscan/geometry.hpp"
#include "pairscan/homography.hpp"
#include "pairscan/image.hpp"
#include "pairscan/image_io.hpp"
#include "pairscan/jsonl.hpp"
#include "pairscan/random.hpp"
#include "pairscan/records.hpp"
#include "pairscan/vocabulary.hpp"
#include "support/fixtures.hpp"

using namespace pairscan;
namespace fs = std::filesystem;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("pairscan_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Counts lattice points of a fine grid inside each box: an independent IoU
// estimate for axis-aligned boxes on integer corners.
double lattice_iou(const BBox& a, const BBox& b, int step) {
  const double lo_x = std::min(a.x1(), b.x1()), hi_x = std::max(a.x2(), b.x2());
  const double lo_y = std::min(a.y1(), b.y1()), hi_y = std::max(a.y2(), b.y2());
  std::size_t in_a = 0, in_b = 0, both = 0;
  for (double y = lo_y + 0.5 / step; y < hi_y; y += 1.0 / step) {
    for (double x = lo_x + 0.5 / step; x < hi_x; x += 1.0 / step) {
      const bool ia = x > a.x1() && x < a.x2() && y > a.y1() && y < a.y2();
      const bool ib = x > b.x1() && x < b.x2() && y > b.y1() && y < b.y2();
      in_a += ia;
      in_b += ib;
      both += ia && ib;
    }
  }
  return static_cast<double>(both) / static_cast<double>(in_a + in_b - both);
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("bbox validation and iou") {
    CHECK(kind_of([] { BBox(5, 5, 5, 9); }) == ErrorKind::InvalidBox);
    CHECK(kind_of([] { BBox(0, 0, NAN, 1); }) == ErrorKind::InvalidBox);
    CHECK(kind_of([] { BBox(3, 0, 1, 1); }) == ErrorKind::InvalidBox);
    const BBox a(0, 0, 10, 10);
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, BBox(10, 0, 20, 10)) == 0.0);
    CHECK(iou(a, BBox(5, 0, 15, 10)) == doctest::Approx(1.0 / 3.0));
    CHECK(geo_mean_size(BBox(0, 0, 4, 9)) == doctest::Approx(6.0));
  }

  TEST_CASE("iou agrees with lattice counting") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
      const auto box = [&] {
        const auto x = rng.integer(0, 20), y = rng.integer(0, 20);
        return BBox(x, y, x + rng.integer(1, 12), y + rng.integer(1, 12));
      };
      const BBox a = box(), b = box();
      CHECK(iou(a, b) == doctest::Approx(lattice_iou(a, b, 4)).epsilon(1e-9));
    }
  }

  TEST_CASE("labeled box trims labels") {
    const LabeledBox b(BBox(0, 0, 1, 1), "  tools ");
    CHECK(b.label() == "tools");
    CHECK(kind_of([] { LabeledBox(BBox(0, 0, 1, 1), "   "); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("homography normalization and inverse") {
    Eigen::Matrix3d m;
    m << 2, 0, 4, 0, 2, -6, 0, 0, -2;
    const Homography h(m);
    CHECK(h.matrix().norm() == doctest::Approx(1.0));
    CHECK(h.matrix()(2, 2) >= 0.0);
    const Point2 p = h.apply({3, 5});
    CHECK(p.x == doctest::Approx(-5.0));
    CHECK(p.y == doctest::Approx(-2.0));
    const Point2 back = h.inverse().apply(p);
    CHECK(back.x == doctest::Approx(3.0));
    CHECK(back.y == doctest::Approx(5.0));
    CHECK(kind_of([] { Homography(Eigen::Matrix3d::Zero()); }) == ErrorKind::SingularHomography);
    Eigen::Matrix3d s = Eigen::Matrix3d::Identity();
    s(2, 2) = 1e-12;
    CHECK(kind_of([&] { Homography{s}; }) == ErrorKind::SingularHomography);
  }

  TEST_CASE("homography with h33 == 0 stays representable") {
    Eigen::Matrix3d m;
    m << -1, 0, 5, 0, 1, 0, 1, 0, 0;
    const Homography h(m);
    CHECK_FALSE(h.unit_h33().has_value());
    CHECK(h.matrix()(0, 0) > 0.0);
    CHECK(kind_of([&] { h.apply({0, 0}); }) == ErrorKind::DegeneratePoint);
    CHECK(Homography::translation(3, 4).unit_h33()->isApprox(
        (Eigen::Matrix3d() << 1, 0, 3, 0, 1, 4, 0, 0, 1).finished()));
  }

  TEST_CASE("bilinear sampling matches the hand formula") {
    RasterImage img(2, 2, 1);
    img.at(0, 0) = 10;
    img.at(1, 0) = 20;
    img.at(0, 1) = 30;
    img.at(1, 1) = 50;
    double v[1];
    REQUIRE(sample_bilinear(img, 0.25, 0.75, v));
    const double expected = 0.75 * 0.25 * 10 + 0.25 * 0.25 * 20 + 0.75 * 0.75 * 30 + 0.25 * 0.75 * 50;
    CHECK(v[0] == doctest::Approx(expected));
    CHECK_FALSE(sample_bilinear(img, 1.01, 0.0, v));
    CHECK(sample_bilinear(img, 1.0 + 1e-7, 0.0, v));
  }

  TEST_CASE("crop with margin snaps outward and clamps") {
    const RasterImage img(100, 50, 1);
    const auto c = crop_with_margin(img, BBox(10.2, 10.7, 20.5, 20.1), 0.1);
    CHECK(c.offset_x == 9);
    CHECK(c.offset_y == 9);
    CHECK(c.image.width() == 22 - 9);
    CHECK(c.image.height() == 22 - 9);
    const auto edge = crop_with_margin(img, BBox(90, 40, 100, 50), 0.5);
    CHECK(edge.offset_x + edge.image.width() == 100);
    CHECK(edge.offset_y + edge.image.height() == 50);
    CHECK(kind_of([&] { crop_with_margin(img, BBox(200, 0, 210, 10), 0.1); }) == ErrorKind::EmptyIntersection);
  }

  TEST_CASE("png round trip") {
    const auto dir = scratch("png");
    const RasterImage rgb = fixtures::smooth_texture(37, 21, 5, 3);
    write_png(dir / "a.png", rgb);
    CHECK(read_png(dir / "a.png") == rgb);
    const RasterImage gray = fixtures::smooth_texture(8, 9, 6, 1);
    CHECK(decode_png(encode_png(gray)) == gray);
    CHECK(kind_of([] { decode_png(std::vector<std::uint8_t>{1, 2, 3}); }) == ErrorKind::Io);
  }

  TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(derive_seed(7, "x")), b(derive_seed(7, "x")), c(derive_seed(7, "y"));
    for (int i = 0; i < 10; ++i) {
      const auto va = a.next();
      CHECK(va == b.next());
      CHECK(va != c.next());
    }
    Rng r(1);
    std::set<std::size_t> seen;
    for (auto i : r.sample_indices(10, 10)) seen.insert(i);
    CHECK(seen.size() == 10);
    for (int i = 0; i < 1000; ++i) {
      const auto v = r.integer(-3, 3);
      CHECK(v >= -3);
      CHECK(v <= 3);
    }
  }

  TEST_CASE("jsonl parse errors name the line") {
    const auto rows = parse_jsonl("{\"a\":1}\n\n{\"b\":2}\n");
    CHECK(rows.size() == 2);
    try {
      parse_jsonl("{\"a\":1}\n{oops}\n");
      FAIL("expected parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }

  TEST_CASE("records round trip and preserve unknown fields") {
    const Json j = {{"sample_id", "s1"},
                    {"target_image", "t.png"},
                    {"reference_image", "r.png"},
                    {"target_telemetry", {{"latitude", 35.0}, {"longitude", 139.0}, {"altitude", 30.0}}},
                    {"ground_truth", {{{"bbox", {1, 2, 3, 4}}, {"label", "tools"}}}},
                    {"note", "kept"}};
    const SampleRecord r = sample_record_from_json(j);
    CHECK(r.ground_truth.size() == 1);
    CHECK(r.extra["note"] == "kept");
    CHECK(to_json(r) == j);
    CHECK(kind_of([&] {
            Json bad = j;
            bad["ground_truth"][0]["bbox"] = {3, 2, 1, 4};
            sample_record_from_json(bad);
          }) == ErrorKind::InvalidBox);
  }

  TEST_CASE("manifest rejects bad rows individually") {
    const auto dir = scratch("manifest");
    write_file_atomic(dir / "m.jsonl",
                      "{\"sample_id\":\"a\",\"target_image\":\"a.png\",\"ground_truth\":[]}\n"
                      "{\"sample_id\":\"b\",\"target_image\":\"b.png\",\"ground_truth\":[{\"bbox\":[0,0,0,0],"
                      "\"label\":\"x\"}]}\n"
                      "{\"sample_id\":\"a\",\"target_image\":\"c.png\",\"ground_truth\":[]}\n");
    const Manifest m = load_manifest(dir / "m.jsonl");
    CHECK(m.records.size() == 1);
    CHECK(m.errors.size() == 2);
    CHECK(m.errors[0].line == 2);
    CHECK(m.resolve("a.png") == dir / "a.png");
  }

  TEST_CASE("default vocabulary") {
    const auto v = AnomalyVocabulary::defaults();
    CHECK(v.size() == 14);
    CHECK(v.is_state_driven("open doors"));
    CHECK(v.is_state_driven("water leakage"));
    CHECK_FALSE(v.is_state_driven("tools"));
    CHECK(kind_of([] { AnomalyVocabulary({"a", "a"}, {}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { AnomalyVocabulary({"a"}, {"b"}); }) == ErrorKind::InvalidArgument);
  }
}
