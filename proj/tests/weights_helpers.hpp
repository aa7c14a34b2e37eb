#pragma once

#include <texturekit/random.hpp>
#include <texturekit/tensor_io.hpp>

#include <string>
#include <vector>

namespace helpers {

using texturekit::FeatureMap;
using texturekit::Shape;

inline FeatureMap mat(std::size_t rows, std::size_t cols, std::vector<float> v) {
    return FeatureMap(Shape{1, rows, cols}, std::move(v));
}

inline FeatureMap random_mat(texturekit::Rng& rng, std::size_t rows, std::size_t cols) {
    std::vector<float> v(rows * cols);
    for (float& x : v) x = float(rng.uniform(-1.0, 1.0));
    return mat(rows, cols, std::move(v));
}

inline void add_random_mlp(texturekit::WeightSet& w, texturekit::Rng& rng, const std::string& p,
                           std::size_t in, std::size_t hidden, std::size_t out) {
    w.add(p + ".w1", random_mat(rng, hidden, in));
    w.add(p + ".b1", random_mat(rng, 1, hidden));
    w.add(p + ".w2", random_mat(rng, out, hidden));
    w.add(p + ".b2", random_mat(rng, 1, out));
}

inline void add_zero_mlp(texturekit::WeightSet& w, const std::string& p, std::size_t in,
                         std::size_t hidden, std::size_t out) {
    w.add(p + ".w1", FeatureMap(Shape{1, hidden, in}));
    w.add(p + ".b1", FeatureMap(Shape{1, 1, hidden}));
    w.add(p + ".w2", FeatureMap(Shape{1, out, hidden}));
    w.add(p + ".b2", FeatureMap(Shape{1, 1, out}));
}

/// Row-major copy of a 1 x rows x cols tensor.
inline std::vector<double> values(const FeatureMap& m) {
    return {m.data().begin(), m.data().end()};
}

inline std::vector<double> transpose(const std::vector<double>& a, std::size_t rows, std::size_t cols) {
    std::vector<double> t(a.size());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = a[i * cols + j];
    }
    return t;
}

} // namespace helpers
