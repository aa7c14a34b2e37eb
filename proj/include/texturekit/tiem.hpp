/**
 * @file tiem.hpp
 * @brief Texture intensity equalization on a region: quantize, count, denoise, equalize
 *
 * A region's per-pixel cosine similarity to its mean feature is min-max
 * rescaled onto [1/N, 1] and softly assigned to the nearest of the N levels
 * n/N. The level histogram is contrast-limited, lifted into an N x C1 feature
 * by a small MLP, and propagated over a learned N x N level graph to give new
 * levels that are painted back onto the region.
 */

#pragma once

#include <texturekit/feature_map.hpp>
#include <texturekit/tensor_io.hpp>

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace texturekit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Similarity {
    std::vector<double> values;  ///< one per pixel, row-major
    std::vector<double> mean;    ///< global average feature, one per channel
};

/// Cosine similarity of every pixel's channel vector to the region mean.
/// The region is divided by its largest magnitude first, so scaling the
/// input by a positive constant gives bit-identical results whenever the
/// scaled values are exact. Zero-norm pixels get similarity 0. Throws
/// DegenerateRegion when the mean feature is zero.
Similarity self_similarity(const FeatureMap& region);

/// Soft one-of-N encoding. Each pixel has exactly one nonzero entry.
struct Encoding {
    std::size_t levels = 0;             ///< N
    std::vector<std::uint32_t> level;   ///< 0-based level index per pixel
    std::vector<double> weight;         ///< value of the nonzero entry, in [1 - 0.5/N, 1]

    std::size_t pixels() const noexcept { return level.size(); }
    /// N x pixels dense matrix.
    Matrix dense() const;
};

struct QuantizationState {
    std::vector<double> levels;      ///< n/N for n = 1..N
    std::vector<double> normalized;  ///< similarity rescaled onto [1/N, 1]
    Encoding encoding;
};

/// Throws InvalidArgument for N < 2, DegenerateQuantization for constant input.
QuantizationState quantize(std::span<const double> similarity, std::size_t n_levels);

/// Normalized level histogram. Throws DegenerateQuantization on zero mass.
std::vector<double> count(const Encoding& e);

/// Contrast limiting: bins above theta*max are clipped to it and the clipped
/// mass is shared equally across all bins. One pass, no re-clipping.
/// Throws InvalidArgument unless theta is in (0, 1].
std::vector<double> denoise(std::span<const double> hist, double theta);

/// Clipped mass for the same rule, exposed for the cap bound.
double clipped_mass(std::span<const double> hist, double theta);

struct CountingMap {
    std::vector<double> counts;
    std::vector<double> denoised;
    double theta = 0.9;
};

/// Two-layer perceptron with a leaky ReLU (slope 0.01) after the first layer.
/// Shapes are taken from the weight set: w1 is hidden x in, w2 is out x hidden.
struct Mlp {
    Matrix w1, w2;
    Vector b1, b2;

    static Mlp load(const WeightSet& weights, const std::string& prefix, std::size_t in_dim);
    std::size_t in_dim() const noexcept { return std::size_t(w1.cols()); }
    std::size_t out_dim() const noexcept { return std::size_t(w2.rows()); }
    /// Applies the MLP to each row of x.
    Matrix forward_rows(const Matrix& x) const;
};

inline constexpr double kLeakySlope = 0.01;

/// N x C1 statistical feature: [MLP(level, denoised count) | mean feature].
Matrix build_stat_feature(std::span<const double> levels, std::span<const double> denoised,
                          std::span<const double> mean, const WeightSet& weights);

struct StatFeature {
    Matrix features;          ///< D, N x C1
    Matrix adjacency;         ///< X, N x N, every column sums to 1
    Matrix levels;            ///< L', N x C2
    FeatureMap reconstructed; ///< R, C2 x H x W
};

/// Column-wise softmax.
Matrix softmax_columns(const Matrix& a);

/// X = softmax_columns(phi1(D) phi2(D)^T), L' = X phi3(D), R = L'^T E.
StatFeature equalize(const Matrix& features, const Encoding& e, std::size_t height,
                     std::size_t width, const WeightSet& weights);

struct TiemConfig {
    std::size_t n_levels = 128;
    double theta = 0.9;
};

struct TiemResult {
    Similarity similarity;
    QuantizationState quantization;
    CountingMap counting;
    StatFeature stat;
};

TiemResult tiem_forward(const FeatureMap& region, const TiemConfig& cfg, const WeightSet& weights);

struct DefaultWeightDims {
    std::size_t tiem_hidden = 16;
    std::size_t tiem_out = 16;      ///< C1 - C
    std::size_t tiem_levels = 64;   ///< C2
    std::size_t ctiem_hidden = 16;
    std::size_t ctiem_out = 16;
    std::size_t adapt_hidden = 64;
    std::size_t adapt_out = 64;     ///< C3
};

/// Xavier-uniform matrices from seed 42 with zero biases, generated in a
/// fixed order, covering every tiem.* and ctiem.* name.
WeightSet default_weights(std::size_t channels, std::size_t n_steps = 3,
                          const DefaultWeightDims& dims = {});

/// Float copy of a histogram whose double-precision sum stays within 1e-9
/// of the original sum. Small entries absorb the rounding residue.
std::vector<float> mass_preserving_floats(std::span<const double> hist);

Matrix to_matrix(const FeatureMap& m);   ///< 1 x rows x cols tensor to rows x cols
FeatureMap from_matrix(const Matrix& m); ///< rows x cols to 1 x rows x cols tensor

} // namespace texturekit
