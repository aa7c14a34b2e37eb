/**
 * @file sampler.hpp
 * @brief Anchor-based importance sampling of rectangular regions
 */

#pragma once

#include <texturekit/feature_map.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace texturekit {

struct SamplerConfig {
    std::size_t m_samples = 16;
    double overgen_factor = 2.0;        ///< k
    double importance_fraction = 0.7;   ///< beta
    std::array<double, 3> anchor_scales{8.0, 16.0, 32.0};
    std::array<double, 3> anchor_ratios{0.5, 1.0, 2.0};  ///< height / width
    std::uint64_t seed = 0;

    std::size_t candidate_count() const;   ///< ceil(k * M)
    std::size_t importance_count() const;  ///< floor(beta * M)
    void validate() const;
};

struct Rect {
    std::size_t top = 0;
    std::size_t left = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    bool operator==(const Rect&) const = default;
};

enum class SampleOrigin { Importance, Coverage };

struct RegionSample {
    std::size_t row = 0;
    std::size_t col = 0;
    Rect rect;
    double score = 0.0;   ///< summed per-anchor standard deviation
    SampleOrigin origin = SampleOrigin::Coverage;

    bool operator==(const RegionSample&) const = default;
};

/// The nine anchors (scale-major, then ratio) centered at (row, col), clamped
/// to a height x width map. Side lengths are round(s*sqrt(r)) by round(s/sqrt(r)).
std::array<Rect, 9> anchor_rects(std::size_t row, std::size_t col, std::size_t height,
                                 std::size_t width, const SamplerConfig& cfg);

/// Population standard deviation over every channel and pixel of each rect,
/// answered in O(1) per rect from integral images.
class RectStats {
public:
    explicit RectStats(const FeatureMap& a);
    double stddev(const Rect& r) const;

private:
    std::size_t height_, width_, channels_;
    std::vector<double> sum_, sum_sq_;  // (height+1) x (width+1)
};

/// Over-generate ceil(kM) distinct centers, keep floor(beta*M) by weighted
/// sampling without replacement on the anchor score, then fill the rest
/// uniformly. Importance picks come first in the result.
std::vector<RegionSample> sample_regions(const FeatureMap& a, const SamplerConfig& cfg);

/// Rescales rect coordinates to another map size, rounding half up and
/// clamping so the rect stays inside with height and width at least one.
RegionSample scale_region(const RegionSample& r, std::size_t from_height, std::size_t from_width,
                          std::size_t to_height, std::size_t to_width);

const char* to_string(SampleOrigin origin) noexcept;

} // namespace texturekit
