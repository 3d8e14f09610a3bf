#include <doctest.h>

#include <cmath>

#include "pairscan/align/compose.hpp"
#include "pairscan/align/estimation.hpp"
#include "pairscan/align/features.hpp"
#include "pairscan/align/telemetry.hpp"
#include "pairscan/error.hpp"
#include "support/fixtures.hpp"

using namespace pairscan;
using namespace pairscan::align;

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

}  // namespace

TEST_SUITE("align") {
  TEST_CASE("telemetry ranking") {
    const Telemetry t = Telemetry::make(35.0, 139.0, 50.0);
    std::vector<PoolEntry> pool{
        {"far", "f.png", Telemetry::make(35.01, 139.0, 50.0)},
        {"near", "n.png", Telemetry::make(35.0001, 139.0, 50.0)},
        {"same", "s.png", Telemetry::make(35.0, 139.0, 50.0)},
        {"high", "h.png", Telemetry::make(35.0, 139.0, 60.0)},
    };
    const auto ranked = retrieve_candidates(t, pool, 3);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].ref_id == "same");
    CHECK(ranked[0].distance_m == 0.0);
    CHECK(ranked[1].ref_id == "high");
    CHECK(ranked[2].ref_id == "near");
    // 0.0001 degree of latitude on a 6371008.8 m sphere
    CHECK(ranked[2].distance_m == doctest::Approx(6371008.8 * 1e-4 * M_PI / 180.0).epsilon(1e-9));
    CHECK(retrieve_candidates(t, pool, 10).size() == 4);
    CHECK(kind_of([&] { retrieve_candidates(std::nullopt, pool, 3); }) == ErrorKind::MissingTelemetry);
  }

  TEST_CASE("dlt recovers an exact homography") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
      const Homography h = fixtures::random_homography(rng, 640, 480);
      const auto c = fixtures::exact_correspondences(h, rng, 50, 640, 480);
      CHECK(estimate_homography_dlt(c).distance_to(h) < 1e-6);
    }
  }

  TEST_CASE("dlt rejects degenerate configurations") {
    std::vector<Correspondence> line;
    for (int i = 0; i < 6; ++i) line.push_back({{double(i), 2.0 * i}, {double(i), 2.0 * i}, 1.0});
    CHECK(kind_of([&] { estimate_homography_dlt(line); }) == ErrorKind::DegenerateConfiguration);
    std::vector<Correspondence> three(line.begin(), line.begin() + 3);
    CHECK(kind_of([&] { estimate_homography_dlt(three); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("ransac ignores outliers") {
    Rng rng(5);
    const Homography h = fixtures::random_homography(rng, 640, 480);
    auto c = fixtures::exact_correspondences(h, rng, 80, 640, 480);
    for (std::size_t i = 0; i < 24; ++i) c[i].p_tgt = {rng.uniform(0, 639), rng.uniform(0, 479)};
    RansacConfig cfg;
    cfg.seed = 9;
    const auto r = estimate_homography_ransac(c, cfg);
    CHECK(r.homography.distance_to(h) < 1e-6);
    CHECK(r.inliers.size() >= 56);
    CHECK(std::is_sorted(r.inliers.begin(), r.inliers.end()));
    const auto again = estimate_homography_ransac(c, cfg);
    CHECK(again.inliers == r.inliers);
    CHECK(again.iterations == r.iterations);
  }

  TEST_CASE("ransac reports consensus failure") {
    Rng rng(6);
    std::vector<Correspondence> noise;
    for (int i = 0; i < 40; ++i) noise.push_back({{rng.uniform(0, 99), rng.uniform(0, 99)}, {rng.uniform(0, 99), rng.uniform(0, 99)}, 1});
    RansacConfig cfg;
    cfg.min_inliers = 30;
    CHECK(kind_of([&] { estimate_homography_ransac(noise, cfg); }) == ErrorKind::ConsensusFailure);
  }

  TEST_CASE("symmetric transfer error is zero for exact pairs") {
    Rng rng(8);
    const Homography h = fixtures::random_homography(rng, 200, 100);
    const auto c = fixtures::exact_correspondences(h, rng, 10, 200, 100);
    CHECK(rms_symmetric_transfer_error(h, c) < 1e-9);
  }

  TEST_CASE("matcher finds a known translation") {
    const RasterImage scene = fixtures::corner_scene(260, 200, 21, 1, 70);
    const RasterImage ref = scene.crop(0, 0, 240, 180);
    const RasterImage tgt = scene.crop(12, 7, 240, 180);
    const auto m = match_features(ref, tgt);
    REQUIRE(m.correspondences.size() >= 12);
    std::size_t agree = 0;
    for (const auto& c : m.correspondences) {
      if (std::abs(c.p_ref.x - c.p_tgt.x - 12) < 1.0 && std::abs(c.p_ref.y - c.p_tgt.y - 7) < 1.0) ++agree;
    }
    CHECK(agree * 10 >= m.correspondences.size() * 8);
    RansacConfig cfg;
    const auto fit = estimate_homography_ransac(m.correspondences, cfg);
    const Point2 p = fit.homography.apply({100, 100});
    CHECK(p.x == doctest::Approx(88).epsilon(0.01));
    CHECK(p.y == doctest::Approx(93).epsilon(0.01));
  }

  TEST_CASE("matcher rejects flat images") {
    const RasterImage flat(128, 128, 1, 90);
    CHECK(kind_of([&] { match_features(flat, flat); }) == ErrorKind::InsufficientFeatures);
    const RasterImage tiny(32, 32, 1, 90);
    CHECK(kind_of([&] { match_features(tiny, tiny); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("reference selection by mean distance") {
    std::vector<CandidateMatch> c{
        {"a", std::nullopt},
        {"b", make_match_result({{{0, 0}, {3, 4}, 1}, {{0, 0}, {3, 4}, 1}, {{0, 0}, {3, 4}, 1}, {{0, 0}, {3, 4}, 1}})},
        {"c", make_match_result({{{0, 0}, {0, 1}, 1}, {{0, 0}, {0, 1}, 1}, {{0, 0}, {0, 1}, 1}, {{0, 0}, {0, 1}, 1}})},
        {"d", make_match_result({{{0, 0}, {0, 1}, 1}, {{0, 0}, {0, 1}, 1}, {{0, 0}, {0, 1}, 1}, {{0, 0}, {0, 1}, 1}})},
        {"e", make_match_result({{{0, 0}, {0, 0}, 1}})},
    };
    CHECK(c[1].match->mean_distance == doctest::Approx(5.0));
    CHECK(select_reference(c) == 2);
    std::vector<CandidateMatch> none{{"a", std::nullopt}, c[4]};
    CHECK(kind_of([&] { select_reference(none); }) == ErrorKind::NoViableCandidate);
  }

  TEST_CASE("warp with identity is lossless and composition concatenates") {
    const RasterImage img = fixtures::smooth_texture(50, 40, 2, 3);
    CHECK(warp_reference(img, Homography::identity(), 50, 40) == img);
    const RasterImage shifted = warp_reference(img, Homography::translation(5, 0), 50, 40);
    CHECK(shifted.at(0, 10, 0) == 0);
    CHECK(shifted.at(20, 10, 1) == img.at(15, 10, 1));
    const RasterImage comp = compose_pair(img, shifted);
    CHECK(comp.width() == 100);
    CHECK(comp.at(60, 3, 2) == shifted.at(10, 3, 2));
    CHECK(kind_of([&] { compose_pair(img, RasterImage(50, 39, 3)); }) == ErrorKind::ShapeMismatch);
    CHECK(kind_of([&] { compose_pair(img, RasterImage(50, 40, 1)); }) == ErrorKind::ShapeMismatch);
  }
}
