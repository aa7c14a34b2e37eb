/**
 * @file ctiem.hpp
 * @brief Dilated horizontal co-occurrence statistics over a whole feature map
 */

#pragma once

#include <texturekit/tiem.hpp>

#include <cstddef>
#include <vector>

namespace texturekit {

/// One nonzero of the pair tensor: pixel (row, col) at level `first` paired
/// with (row, col + step) at level `second`.
struct PairEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    std::uint32_t first = 0;
    std::uint32_t second = 0;
    double weight = 0.0;
};

/// Sparse pair tensor for one step. Every pixel has exactly one encoded
/// level, so each in-range pair contributes a single entry.
struct Cooccurrence {
    std::size_t levels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t step = 0;
    std::vector<PairEntry> entries;
};

/// Pairs (i, j) with (i, j + step) for j + step < width; pairs past the
/// right edge are dropped. Throws InvalidArgument when step == 0 or step >= width.
Cooccurrence cooccur(const Encoding& e, std::size_t height, std::size_t width, std::size_t step);

/// N x N normalized counts from the pair tensor, row-major (first, second).
std::vector<double> cooccur_count(const Cooccurrence& pairs);

/// Same counts accumulated straight from the encoding without listing pairs.
std::vector<double> cooccur_count(const Encoding& e, std::size_t height, std::size_t width,
                                  std::size_t step);

/// Contrast limiting over the N^2 cells.
std::vector<double> cooccur_denoise(std::span<const double> counts, double theta);

/// Per-step blocks [MLP(L_m, L_n, C~_mn) | mean feature] over the N x N
/// cells, stacked along channels. Result is channels x N^2, cell m*N + n.
Matrix cooccur_stat(std::span<const double> levels, const std::vector<std::vector<double>>& denoised,
                    std::span<const double> mean, const WeightSet& weights);

struct Texture {
    Matrix adapted;         ///< D', C3 x N^2
    std::vector<double> t;  ///< cell average of D', C3 values
    FeatureMap map;         ///< t broadcast to C3 x H x W
};

Texture adapt(const Matrix& stat, std::size_t height, std::size_t width, const WeightSet& weights);

struct CtiemConfig {
    std::size_t n_levels = 8;
    double theta = 0.9;
    std::vector<std::size_t> steps{1, 3, 5};
};

struct CtiemResult {
    Similarity similarity;
    QuantizationState quantization;
    std::vector<std::vector<double>> counts;    ///< per step, N^2
    std::vector<std::vector<double>> denoised;  ///< per step, N^2
    Matrix stat;
    Texture texture;
};

CtiemResult ctiem_forward(const FeatureMap& a, const CtiemConfig& cfg, const WeightSet& weights);

} // namespace texturekit
