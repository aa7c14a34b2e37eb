#include "oracles.hpp"

#include <texturekit/error.hpp>
#include <texturekit/sampler.hpp>

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace texturekit;

namespace {

RegionSample with_rect(Rect r) {
    RegionSample s;
    s.rect = r;
    return s;
}

SamplerConfig config(std::size_t m, double k, double beta, std::uint64_t seed) {
    SamplerConfig c;
    c.m_samples = m;
    c.overgen_factor = k;
    c.importance_fraction = beta;
    c.seed = seed;
    return c;
}

} // namespace

TEST_SUITE("sampler") {

TEST_CASE("scale_region examples") {
    const auto a = scale_region(with_rect({0, 0, 32, 32}), 64, 64, 32, 32);
    CHECK(a.rect == Rect{0, 0, 16, 16});
    const auto b = scale_region(with_rect({10, 20, 31, 15}), 100, 100, 50, 50);
    CHECK(b.rect == Rect{5, 10, 16, 8});
    const auto same = scale_region(with_rect({3, 4, 5, 6}), 40, 30, 40, 30);
    CHECK(same.rect == Rect{3, 4, 5, 6});
}

TEST_CASE("scale_region stays inside with positive size") {
    Rng rng(51);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t fh = 1 + rng.below(200), fw = 1 + rng.below(200);
        const std::size_t th = 1 + rng.below(200), tw = 1 + rng.below(200);
        Rect r;
        r.top = rng.below(fh);
        r.left = rng.below(fw);
        r.height = 1 + rng.below(fh - r.top);
        r.width = 1 + rng.below(fw - r.left);
        RegionSample s = with_rect(r);
        s.row = rng.below(fh);
        s.col = rng.below(fw);
        const auto q = scale_region(s, fh, fw, th, tw);
        CHECK(q.rect.height >= 1);
        CHECK(q.rect.width >= 1);
        CHECK(q.rect.top + q.rect.height <= th);
        CHECK(q.rect.left + q.rect.width <= tw);
        CHECK(q.row < th);
        CHECK(q.col < tw);
    }
}

TEST_CASE("anchor sizes and clamping") {
    const SamplerConfig cfg;
    const auto mid = anchor_rects(50, 50, 100, 100, cfg);
    CHECK(mid[0] == Rect{50 - 3, 50 - 5, 6, 11});    // 8 at ratio 0.5
    CHECK(mid[1] == Rect{50 - 4, 50 - 4, 8, 8});     // 8 at ratio 1
    CHECK(mid[4] == Rect{50 - 8, 50 - 8, 16, 16});
    CHECK(mid[8] == Rect{50 - 22, 50 - 11, 45, 23}); // 32 at ratio 2
    for (std::size_t row : {0u, 5u, 63u}) {
        for (std::size_t col : {0u, 31u, 63u}) {
            for (const Rect& r : anchor_rects(row, col, 64, 64, cfg)) {
                CHECK(r.height >= 1);
                CHECK(r.width >= 1);
                CHECK(r.top + r.height <= 64);
                CHECK(r.left + r.width <= 64);
                CHECK(r.top <= row);
                CHECK(row < r.top + r.height);
                CHECK(r.left <= col);
                CHECK(col < r.left + r.width);
            }
        }
    }
}

TEST_CASE("rect statistics match a two-pass oracle") {
    Rng rng(52);
    const FeatureMap a = oracle::random_map(rng, Shape{3, 20, 17}, -4, 4);
    const RectStats stats(a);
    for (int trial = 0; trial < 300; ++trial) {
        Rect r;
        r.top = rng.below(20);
        r.left = rng.below(17);
        r.height = 1 + rng.below(20 - r.top);
        r.width = 1 + rng.below(17 - r.left);
        CHECK(stats.stddev(r) == doctest::Approx(oracle::rect_std(a, r.top, r.left, r.height, r.width)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("scores are the summed anchor deviations") {
    Rng rng(53);
    const FeatureMap a = oracle::random_map(rng, Shape{2, 40, 40});
    const SamplerConfig cfg = config(8, 2, 0.5, 3);
    for (const auto& s : sample_regions(a, cfg)) {
        double expect = 0.0;
        for (const Rect& r : anchor_rects(s.row, s.col, 40, 40, cfg)) {
            expect += oracle::rect_std(a, r.top, r.left, r.height, r.width);
        }
        CHECK(s.score == doctest::Approx(expect).epsilon(1e-9));
        const auto anchors = anchor_rects(s.row, s.col, 40, 40, cfg);
        CHECK(std::find(anchors.begin(), anchors.end(), s.rect) != anchors.end());
    }
}

TEST_CASE("constant map still yields M distinct centers") {
    const FeatureMap a = FeatureMap::filled(Shape{1, 32, 32}, 0.5f);
    const auto out = sample_regions(a, config(16, 2, 0.7, 9));
    REQUIRE(out.size() == 16);
    std::set<std::pair<std::size_t, std::size_t>> centers;
    for (const auto& s : out) {
        CHECK(s.score == 0.0);
        centers.insert({s.row, s.col});
    }
    CHECK(centers.size() == 16);
}

TEST_CASE("origins follow beta") {
    Rng rng(54);
    const FeatureMap a = oracle::random_map(rng, Shape{1, 32, 32});
    for (double beta : {0.0, 0.5, 0.7, 1.0}) {
        const auto cfg = config(10, 3, beta, 4);
        const auto out = sample_regions(a, cfg);
        REQUIRE(out.size() == 10);
        const std::size_t n_imp = cfg.importance_count();
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i].origin == (i < n_imp ? SampleOrigin::Importance : SampleOrigin::Coverage));
        }
    }
    CHECK(config(10, 3, 0.7, 0).importance_count() == 7);
    CHECK(config(10, 2.25, 0.7, 0).candidate_count() == 23);
}

TEST_CASE("determinism and distinct centers") {
    Rng rng(55);
    const FeatureMap a = oracle::random_map(rng, Shape{2, 48, 48});
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto cfg = config(12, 2, 0.7, seed);
        const auto first = sample_regions(a, cfg);
        CHECK(first == sample_regions(a, cfg));
        std::set<std::pair<std::size_t, std::size_t>> centers;
        for (const auto& s : first) centers.insert({s.row, s.col});
        CHECK(centers.size() == 12);
    }
    CHECK(sample_regions(a, config(12, 2, 0.7, 1)) != sample_regions(a, config(12, 2, 0.7, 2)));
}

TEST_CASE("scores scale with the map, selection does not change") {
    Rng rng(56);
    const FeatureMap a = oracle::random_map(rng, Shape{1, 40, 40});
    const auto cfg = config(10, 3, 0.8, 11);
    const auto base = sample_regions(a, cfg);
    for (float c : {0.5f, 2.0f, 4.0f}) {
        const auto scaled = sample_regions(scale(a, c), cfg);
        REQUIRE(scaled.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(scaled[i].row == base[i].row);
            CHECK(scaled[i].col == base[i].col);
            CHECK(scaled[i].rect == base[i].rect);
            CHECK(scaled[i].score == doctest::Approx(c * base[i].score).epsilon(1e-9));
        }
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(sample_regions(FeatureMap(Shape{1, 7, 64}), SamplerConfig{}), Error);
    CHECK_THROWS_AS(sample_regions(FeatureMap(Shape{1, 8, 8}), config(40, 2, 0.5, 0)), Error);
    CHECK_THROWS_AS(config(16, 0.5, 0.5, 0).validate(), Error);
    CHECK_THROWS_AS(config(16, 2, 1.5, 0).validate(), Error);
    CHECK_THROWS_AS(config(0, 2, 0.5, 0).validate(), Error);
    CHECK(std::string(to_string(SampleOrigin::Importance)) == "importance");
    CHECK(std::string(to_string(SampleOrigin::Coverage)) == "coverage");
}

} // TEST_SUITE
