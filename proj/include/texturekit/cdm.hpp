/**
 * @file cdm.hpp
 * @brief Contourlet decomposition: iterated LP with a DFB on every bandpass
 */

#pragma once

#include <texturekit/dfb.hpp>
#include <texturekit/feature_map.hpp>
#include <texturekit/pyramid.hpp>

#include <cstddef>
#include <vector>

namespace texturekit {

struct CdmConfig {
    std::vector<unsigned> dfb_levels{4, 3};  ///< m per stage; its length is the stage count
    double transition_width = 0.1;
    LpConfig lp = LpConfig::burt_adelson();

    std::size_t num_levels() const noexcept { return dfb_levels.size(); }

    /// Throws InvalidArgument when the stage list is empty or the input
    /// cannot be decimated num_levels times with every stage >= 2^m.
    void validate(std::size_t height, std::size_t width) const;
};

/// Directional subbands per stage. Stage n (0-based) holds 2^m_n maps of
/// C x H/p^(n+1) x W/p^(n+1).
struct StructuralFeature {
    std::vector<std::vector<FeatureMap>> levels;

    std::size_t subband_count() const noexcept;
    /// Every element of every subband, stage by stage, subband by subband.
    std::vector<float> flatten() const;
};

/// Keep-every-p-th sample along both axes, starting at index 0.
FeatureMap decimate(const FeatureMap& x, std::size_t p);

/// For each stage: (low, high) = lp_analyze(low); the high band is decimated
/// by p and split by dfb_decompose with that stage's m.
StructuralFeature cdm_forward(const FeatureMap& x, const CdmConfig& cfg);

/// Mean over stages of (sum of squared differences in the stage) / (H_n * W_n).
/// Throws ShapeMismatch unless the two features have identical layout.
double structural_loss(const StructuralFeature& teacher, const StructuralFeature& student);

} // namespace texturekit
