/**
 * @file pyramid.hpp
 * @brief Laplacian pyramid analysis/synthesis
 *
 * One analysis stage filters with H and decimates by p in both axes (low),
 * then subtracts the zero-inserted, G-filtered and p^2-gain-corrected
 * expansion of low from the input (high). Because high is the residual,
 * synthesis is an exact inverse for any pair of filters.
 *
 * Convolutions use centered kernels and reflect-101 boundaries
 * (index -1 maps to 1, n maps to n - 2).
 */

#pragma once

#include <texturekit/feature_map.hpp>

#include <cstddef>
#include <vector>

namespace texturekit {

struct LpConfig {
    std::vector<double> analysis;   ///< H, odd length, unit DC gain
    std::vector<double> synthesis;  ///< G, odd length, unit DC gain
    std::size_t factor = 2;         ///< p, separable keep-every-p-th decimation

    /// Burt-Adelson 5-tap kernel [1, 4, 6, 4, 1] / 16 for both H and G, p = 2.
    static LpConfig burt_adelson();

    /// Throws InvalidArgument unless both kernels are odd-length with
    /// coefficients summing to 1 within 1e-6 and factor >= 2.
    void validate() const;
};

struct LpLevel {
    FeatureMap low;   ///< C x H/p x W/p
    FeatureMap high;  ///< C x H x W
};

/// Reflect-101 index into [0, n).
std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) noexcept;

/// Pads bottom/right by reflection so both spatial dims are positive
/// multiples of `multiple`. Returns the input unchanged when already aligned.
FeatureMap reflect_pad(const FeatureMap& x, std::size_t multiple);

/// Separable filtering with the same kernel along both axes.
FeatureMap convolve_separable(const FeatureMap& x, const std::vector<double>& kernel);

/// Throws InvalidArgument when H or W is not a positive multiple of p
/// (use reflect_pad first).
LpLevel lp_analyze(const FeatureMap& x, const LpConfig& cfg);

/// high + expand(low). Throws ShapeMismatch unless low is high / p.
FeatureMap lp_synthesize(const FeatureMap& low, const FeatureMap& high, const LpConfig& cfg);

/// The prediction subtracted by lp_analyze: zero-insert `low` to
/// (height, width), filter with p * G along each axis.
FeatureMap lp_expand(const FeatureMap& low, std::size_t height, std::size_t width,
                     const LpConfig& cfg);

} // namespace texturekit
