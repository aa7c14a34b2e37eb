/**
 * @file dfb.hpp
 * @brief Directional filter bank realized with frequency-plane wedge masks
 *
 * The frequency plane is split into 2^m equal-angle wedges over the
 * orientation half-circle. With phi = atan2(f_row, f_col) folded into [0, pi),
 * wedge k spans [pi/4 + k*pi/2^m, pi/4 + (k+1)*pi/2^m) modulo pi, so wedges
 * 0 .. 2^(m-1)-1 tile the vertical-frequency fan (|f_row| >= |f_col|) and the
 * remaining wedges tile the horizontal-frequency fan.
 *
 * Wedge edges are feathered with a raised-cosine of angular width
 * transition_width * pi; the masks are normalized to sum to one at every bin
 * and symmetrized under f -> -f so real inputs give real subbands. Subbands
 * are undecimated, so reconstruction is a plain sum.
 */

#pragma once

#include <texturekit/feature_map.hpp>

#include <cstddef>
#include <vector>

namespace texturekit {

struct DfbConfig {
    unsigned levels = 3;             ///< m; yields 2^m subbands
    double transition_width = 0.1;   ///< fraction of pi, in [0, 0.5); 0 gives hard masks

    std::size_t subband_count() const noexcept { return std::size_t{1} << levels; }

    /// Throws InvalidArgument for levels == 0, a transition width outside
    /// [0, 0.5) or a (height, width) smaller than 2^m.
    void validate(std::size_t height, std::size_t width) const;
};

enum class DirectionGroup { Vertical, Horizontal };

/// Fan that subband k belongs to for a bank with `levels` levels.
DirectionGroup direction_group(std::size_t subband, unsigned levels) noexcept;

/// Signed frequency (cycles/sample) of DFT bin k out of n; the Nyquist bin of
/// an even length maps to -0.5.
double bin_frequency(std::size_t k, std::size_t n) noexcept;

/// Full-grid masks: result[k][ky * width + kx] for every DFT bin.
std::vector<std::vector<double>> dfb_masks(std::size_t height, std::size_t width,
                                           const DfbConfig& cfg);

/// 2^m subbands, each with the input's shape.
std::vector<FeatureMap> dfb_decompose(const FeatureMap& high, const DfbConfig& cfg);

/// Element-wise sum. Throws InvalidArgument for an empty list or a count that
/// is not a power of two, ShapeMismatch for differing shapes.
FeatureMap dfb_reconstruct(const std::vector<FeatureMap>& subbands);

} // namespace texturekit
