#include "oracles.hpp"

#include <texturekit/cdm.hpp>
#include <texturekit/error.hpp>

#include <doctest.h>

using namespace texturekit;

namespace {

CdmConfig one_stage(unsigned m) {
    CdmConfig cfg;
    cfg.dfb_levels = {m};
    return cfg;
}

StructuralFeature filled_feature(const CdmConfig& cfg, Shape in, float v) {
    StructuralFeature f = cdm_forward(FeatureMap(in), cfg);
    for (auto& stage : f.levels) {
        for (auto& b : stage) std::fill(b.data().begin(), b.data().end(), v);
    }
    return f;
}

} // namespace

TEST_SUITE("cdm") {

TEST_CASE("default shapes for a 32x32 input") {
    Rng rng(41);
    const StructuralFeature f = cdm_forward(oracle::random_map(rng, Shape{3, 32, 32}), CdmConfig{});
    REQUIRE(f.levels.size() == 2);
    CHECK(f.levels[0].size() == 16);
    CHECK(f.levels[1].size() == 8);
    for (const auto& b : f.levels[0]) CHECK(b.shape() == Shape{3, 16, 16});
    for (const auto& b : f.levels[1]) CHECK(b.shape() == Shape{3, 8, 8});
    CHECK(f.subband_count() == 24);
    CHECK(f.flatten().size() == 16 * 3 * 256 + 8 * 3 * 64);
}

TEST_CASE("constant input has no directional energy") {
    for (float c : {0.0f, 1.0f, 0.42f}) {
        const StructuralFeature f = cdm_forward(FeatureMap::filled(Shape{2, 32, 32}, c), CdmConfig{});
        for (float v : f.flatten()) CHECK(std::abs(v) <= 1e-5);
    }
}

TEST_CASE("one stage equals analyze, decimate, decompose") {
    Rng rng(42);
    const FeatureMap x = oracle::random_map(rng, Shape{1, 16, 16});
    const CdmConfig cfg = one_stage(2);
    const StructuralFeature f = cdm_forward(x, cfg);
    const auto ref = dfb_decompose(decimate(lp_analyze(x, cfg.lp).high, 2), DfbConfig{2, 0.1});
    REQUIRE(f.levels.size() == 1);
    REQUIRE(f.levels[0].size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(f.levels[0][k] == ref[k]);
}

TEST_CASE("decimate keeps every p-th sample from the origin") {
    FeatureMap x(Shape{2, 4, 6});
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = float(i);
    const FeatureMap d = decimate(x, 2);
    REQUIRE(d.shape() == Shape{2, 2, 3});
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t y = 0; y < 2; ++y) {
            for (std::size_t k = 0; k < 3; ++k) CHECK(d.at(c, y, k) == x.at(c, 2 * y, 2 * k));
        }
    }
    CHECK(decimate(x, 1) == x);
}

TEST_CASE("forward is linear") {
    Rng rng(43);
    const FeatureMap x = oracle::random_map(rng, Shape{1, 32, 32});
    const FeatureMap y = oracle::random_map(rng, Shape{1, 32, 32});
    const auto fx = cdm_forward(x, CdmConfig{}).flatten();
    const auto fy = cdm_forward(y, CdmConfig{}).flatten();
    const auto fxy = cdm_forward(add(scale(x, 2.0f), scale(y, -0.5f)), CdmConfig{}).flatten();
    double worst = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) worst = std::max(worst, std::abs(fxy[i] - (2.0 * fx[i] - 0.5 * fy[i])));
    CHECK(worst <= 1e-5);
}

TEST_CASE("structural loss of identical features is zero") {
    Rng rng(44);
    const auto f = cdm_forward(oracle::random_map(rng, Shape{2, 32, 32}), CdmConfig{});
    CHECK(structural_loss(f, f) == 0.0);
}

TEST_CASE("unit offset in one stage gives 2^m times C") {
    for (unsigned m : {1u, 2u, 3u}) {
        for (std::size_t c : {1u, 3u}) {
            const CdmConfig cfg = one_stage(m);
            const Shape in{c, 32, 32};
            const auto t = filled_feature(cfg, in, 0.25f);
            const auto s = filled_feature(cfg, in, 1.25f);
            CHECK(structural_loss(t, s) == doctest::Approx(double(1u << m) * double(c)));
        }
    }
}

TEST_CASE("structural loss matches a nested-loop oracle") {
    Rng rng(45);
    const auto t = cdm_forward(oracle::random_map(rng, Shape{2, 32, 32}), CdmConfig{});
    const auto s = cdm_forward(oracle::random_map(rng, Shape{2, 32, 32}), CdmConfig{});
    double total = 0.0;
    for (std::size_t n = 0; n < t.levels.size(); ++n) {
        double acc = 0.0;
        const auto& sh = t.levels[n][0].shape();
        for (std::size_t k = 0; k < t.levels[n].size(); ++k) {
            for (std::size_t c = 0; c < sh.channels; ++c) {
                for (std::size_t y = 0; y < sh.height; ++y) {
                    for (std::size_t x = 0; x < sh.width; ++x) {
                        const double d = double(t.levels[n][k].at(c, y, x)) - s.levels[n][k].at(c, y, x);
                        acc += d * d;
                    }
                }
            }
        }
        total += acc / double(sh.height * sh.width);
    }
    total /= double(t.levels.size());
    CHECK(structural_loss(t, s) == doctest::Approx(total).epsilon(1e-9));
    CHECK(structural_loss(t, s) == structural_loss(s, t));
}

TEST_CASE("layout mismatches and bad configurations") {
    const auto a = filled_feature(CdmConfig{}, Shape{1, 32, 32}, 0.0f);
    const auto b = filled_feature(one_stage(4), Shape{1, 32, 32}, 0.0f);
    const auto c = filled_feature(CdmConfig{}, Shape{2, 32, 32}, 0.0f);
    CHECK_THROWS_AS(structural_loss(a, b), Error);
    CHECK_THROWS_AS(structural_loss(a, c), Error);
    CHECK_THROWS_AS(cdm_forward(FeatureMap(Shape{1, 30, 32}), CdmConfig{}), Error);
    CHECK_THROWS_AS(cdm_forward(FeatureMap(Shape{1, 16, 16}), CdmConfig{}), Error);
    CdmConfig empty;
    empty.dfb_levels.clear();
    CHECK_THROWS_AS(cdm_forward(FeatureMap(Shape{1, 32, 32}), empty), Error);
}

} // TEST_SUITE
