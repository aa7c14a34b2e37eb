#include "oracles.hpp"

#include <texturekit/dfb.hpp>
#include <texturekit/error.hpp>

#include <doctest.h>

#include <numbers>

using namespace texturekit;

namespace {

std::vector<double> plane(const FeatureMap& x, std::size_t c) {
    auto ch = x.channel(c);
    return {ch.begin(), ch.end()};
}

FeatureMap cosine(std::size_t h, std::size_t w, double fy, double fx) {
    FeatureMap x(Shape{1, h, w});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t c = 0; c < w; ++c) {
            x.at(0, y, c) = float(std::cos(2.0 * std::numbers::pi * (fy * double(y) / double(h) +
                                                                    fx * double(c) / double(w))));
        }
    }
    return x;
}

double energy(const FeatureMap& x) {
    double e = 0.0;
    for (float v : x.data()) e += double(v) * v;
    return e;
}

double vertical_share(const std::vector<FeatureMap>& bands, unsigned m) {
    double v = 0.0, t = 0.0;
    for (std::size_t k = 0; k < bands.size(); ++k) {
        const double e = energy(bands[k]);
        t += e;
        if (direction_group(k, m) == DirectionGroup::Vertical) v += e;
    }
    return v / t;
}

} // namespace

TEST_SUITE("dfb") {

TEST_CASE("subbands match naive DFT filtering") {
    Rng rng(31);
    const std::size_t h = 8, w = 12;
    const FeatureMap x = oracle::random_map(rng, Shape{2, h, w}, -1, 1);
    const DfbConfig cfg{2, 0.1};
    const auto bands = dfb_decompose(x, cfg);
    const auto masks = dfb_masks(h, w, cfg);
    REQUIRE(bands.size() == 4);
    for (std::size_t c = 0; c < 2; ++c) {
        const auto freq = oracle::dft2(plane(x, c), h, w);
        for (std::size_t k = 0; k < 4; ++k) {
            oracle::Spectrum filtered(freq.size());
            for (std::size_t b = 0; b < freq.size(); ++b) filtered[b] = freq[b] * masks[k][b];
            const auto back = oracle::idft2(filtered, h, w);
            for (std::size_t i = 0; i < h * w; ++i) {
                CHECK(std::abs(back[i].imag()) < 1e-9);
                CHECK(bands[k].channel(c)[i] == doctest::Approx(back[i].real()).epsilon(1e-5).scale(1.0));
            }
        }
    }
}

TEST_CASE("masks are a symmetric, nonnegative partition of unity") {
    for (unsigned m : {1u, 2u, 3u, 4u}) {
        for (double tw : {0.0, 0.1, 0.3}) {
            const std::size_t h = 16, w = 32;
            const auto masks = dfb_masks(h, w, DfbConfig{m, tw});
            REQUIRE(masks.size() == (std::size_t{1} << m));
            for (std::size_t ky = 0; ky < h; ++ky) {
                for (std::size_t kx = 0; kx < w; ++kx) {
                    const std::size_t b = ky * w + kx;
                    const std::size_t mirror = ((h - ky) % h) * w + (w - kx) % w;
                    double s = 0.0;
                    for (const auto& mk : masks) {
                        CHECK(mk[b] >= 0.0);
                        CHECK(mk[b] == doctest::Approx(mk[mirror]).epsilon(1e-12));
                        s += mk[b];
                    }
                    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("hard masks are indicators away from the axes") {
    const auto masks = dfb_masks(16, 16, DfbConfig{3, 0.0});
    // Pure vertical frequency: one of the first half of the wedges owns it outright.
    const std::size_t b = 3 * 16 + 1;
    double owner = 0.0;
    std::size_t owners = 0;
    for (std::size_t k = 0; k < masks.size(); ++k) {
        if (masks[k][b] > 0.0) {
            ++owners;
            owner = masks[k][b];
            CHECK(direction_group(k, 3) == DirectionGroup::Vertical);
        }
    }
    CHECK(owners == 1);
    CHECK(owner == 1.0);
}

TEST_CASE("one level splits into two bands that sum to the input") {
    Rng rng(32);
    const FeatureMap x = oracle::random_map(rng, Shape{1, 16, 16});
    const auto bands = dfb_decompose(x, DfbConfig{1, 0.1});
    REQUIRE(bands.size() == 2);
    CHECK(max_abs_diff(add(bands[0], bands[1]), x) <= 1e-5);
}

TEST_CASE("vertical-frequency sinusoid lands in the vertical fan") {
    const FeatureMap x = cosine(32, 32, 4, 0);
    const auto bands = dfb_decompose(x, DfbConfig{3, 0.1});
    const double share = vertical_share(bands, 3);
    CHECK(share >= 0.95);

    // Same ratio from the naive DFT with the library masks.
    const auto masks = dfb_masks(32, 32, DfbConfig{3, 0.1});
    const auto freq = oracle::dft2(plane(x, 0), 32, 32);
    double v = 0.0, t = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
        double e = 0.0;
        for (std::size_t b = 0; b < freq.size(); ++b) e += std::norm(freq[b] * masks[k][b]);
        t += e;
        if (direction_group(k, 3) == DirectionGroup::Vertical) v += e;
    }
    CHECK(share == doctest::Approx(v / t).epsilon(1e-5));
}

TEST_CASE("horizontal-frequency sinusoid lands in the horizontal fan") {
    const auto bands = dfb_decompose(cosine(32, 32, 0, 5), DfbConfig{3, 0.1});
    CHECK(vertical_share(bands, 3) <= 0.05);
}

TEST_CASE("direction groups split the bank in half") {
    for (unsigned m : {1u, 2u, 3u, 4u}) {
        std::size_t vertical = 0;
        for (std::size_t k = 0; k < (std::size_t{1} << m); ++k) {
            vertical += direction_group(k, m) == DirectionGroup::Vertical;
        }
        CHECK(vertical == (std::size_t{1} << (m - 1)));
    }
}

TEST_CASE("bin frequencies") {
    CHECK(bin_frequency(0, 8) == 0.0);
    CHECK(bin_frequency(1, 8) == 0.125);
    CHECK(bin_frequency(4, 8) == -0.5);
    CHECK(bin_frequency(7, 8) == -0.125);
    CHECK(bin_frequency(2, 5) == 0.4);
    CHECK(bin_frequency(3, 5) == -0.4);
}

TEST_CASE("zero input gives zero subbands") {
    for (const auto& b : dfb_decompose(FeatureMap(Shape{2, 16, 16}), DfbConfig{3, 0.1})) {
        for (float v : b.data()) CHECK(v == 0.0f);
    }
}

TEST_CASE("reconstruction over 100 seeds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(1000 + seed);
        const unsigned m = 1 + unsigned(rng.below(4));
        const std::size_t side = std::size_t{1} << (4 + rng.below(2));
        const FeatureMap x = oracle::random_map(rng, Shape{1 + rng.below(2), side, side}, -3, 3);
        CHECK(max_abs_diff(dfb_reconstruct(dfb_decompose(x, DfbConfig{m, 0.1})), x) < 1e-5);
    }
}

TEST_CASE("a single subband reconstructs to itself") {
    Rng rng(33);
    const FeatureMap x = oracle::random_map(rng, Shape{1, 4, 4});
    CHECK(dfb_reconstruct({x}) == x);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(dfb_reconstruct({}), Error);
    const FeatureMap a(Shape{1, 4, 4});
    CHECK_THROWS_AS(dfb_reconstruct({a, a, a}), Error);
    try {
        dfb_reconstruct({a, FeatureMap(Shape{1, 4, 8})});
        FAIL("expected ShapeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ShapeMismatch);
    }
    CHECK_THROWS_AS(dfb_decompose(FeatureMap(Shape{1, 4, 4}), DfbConfig{3, 0.1}), Error);
    CHECK_THROWS_AS(dfb_decompose(FeatureMap(Shape{1, 16, 16}), DfbConfig{0, 0.1}), Error);
    CHECK_THROWS_AS(dfb_decompose(FeatureMap(Shape{1, 16, 16}), DfbConfig{2, 0.5}), Error);
    CHECK_THROWS_AS(dfb_decompose(FeatureMap(Shape{1, 16, 16}), DfbConfig{2, -0.1}), Error);
}

} // TEST_SUITE
