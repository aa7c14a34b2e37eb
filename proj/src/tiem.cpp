#include <texturekit/tiem.hpp>

#include <texturekit/error.hpp>
#include <texturekit/random.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace texturekit {

namespace {

void check_theta(double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
    }
}

// True when level n (1-based) is inside the half-open window around s.
bool in_window(std::size_t n, std::size_t count, double s) {
    const double half = 0.5 / double(count);
    const double d = double(n) / double(count) - s;
    return -half <= d && d < half;
}

FeatureMap xavier(Rng& rng, std::size_t rows, std::size_t cols) {
    const double a = std::sqrt(6.0 / double(rows + cols));
    std::vector<float> v(rows * cols);
    for (float& x : v) x = float(rng.uniform(-a, a));
    return FeatureMap(Shape{1, rows, cols}, std::move(v));
}

FeatureMap zeros(std::size_t n) { return FeatureMap(Shape{1, 1, n}); }

void add_mlp(WeightSet& w, Rng& rng, const std::string& prefix, std::size_t in,
             std::size_t hidden, std::size_t out) {
    w.add(prefix + ".w1", xavier(rng, hidden, in));
    w.add(prefix + ".b1", zeros(hidden));
    w.add(prefix + ".w2", xavier(rng, out, hidden));
    w.add(prefix + ".b2", zeros(out));
}

Vector to_vector(const FeatureMap& m) {
    Vector v(Eigen::Index(m.size()));
    auto d = m.data();
    for (std::size_t i = 0; i < d.size(); ++i) v[Eigen::Index(i)] = d[i];
    return v;
}

} // namespace

Similarity self_similarity(const FeatureMap& region) {
    const std::size_t channels = region.channels();
    const std::size_t pixels = region.shape().plane();

    double scale = 0.0;
    for (float v : region.data()) scale = std::max(scale, std::abs(double(v)));
    if (scale == 0.0) throw Error(ErrorCode::DegenerateRegion, "region is all zeros");

    std::vector<double> x(region.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(region.data()[i]) / scale;

    Similarity out;
    out.mean.assign(channels, 0.0);
    double g_norm = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < pixels; ++i) s += x[c * pixels + i];
        out.mean[c] = s / double(pixels);
        g_norm += out.mean[c] * out.mean[c];
    }
    g_norm = std::sqrt(g_norm);
    if (g_norm == 0.0) {
        throw Error(ErrorCode::DegenerateRegion, "mean feature is zero; cosine similarity undefined");
    }

    out.values.assign(pixels, 0.0);
    for (std::size_t i = 0; i < pixels; ++i) {
        double dot = 0.0, norm = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
            const double v = x[c * pixels + i];
            dot += out.mean[c] * v;
            norm += v * v;
        }
        if (norm == 0.0) continue;
        out.values[i] = std::clamp(dot / (g_norm * std::sqrt(norm)), -1.0, 1.0);
    }
    // Report the mean in the caller's units.
    for (double& g : out.mean) g *= scale;
    return out;
}

Matrix Encoding::dense() const {
    Matrix m = Matrix::Zero(Eigen::Index(levels), Eigen::Index(pixels()));
    for (std::size_t i = 0; i < pixels(); ++i) m(level[i], Eigen::Index(i)) = weight[i];
    return m;
}

QuantizationState quantize(std::span<const double> similarity, std::size_t n_levels) {
    if (n_levels < 2) throw Error(ErrorCode::InvalidArgument, "need at least two levels");
    if (similarity.empty()) throw Error(ErrorCode::InvalidArgument, "empty similarity vector");
    const auto [lo_it, hi_it] = std::minmax_element(similarity.begin(), similarity.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) {
        throw Error(ErrorCode::DegenerateQuantization, "similarity is constant over the region");
    }

    const double n = double(n_levels);
    QuantizationState q;
    q.levels.resize(n_levels);
    for (std::size_t k = 0; k < n_levels; ++k) q.levels[k] = double(k + 1) / n;

    q.normalized.resize(similarity.size());
    q.encoding.levels = n_levels;
    q.encoding.level.resize(similarity.size());
    q.encoding.weight.resize(similarity.size());
    for (std::size_t i = 0; i < similarity.size(); ++i) {
        const double t = (similarity[i] - lo) / (hi - lo);
        const double s = (1.0 + (n - 1.0) * t) / n;
        q.normalized[i] = s;

        auto level = std::size_t(std::clamp(std::ceil(s * n - 0.5), 1.0, n));
        // Rounding can put s a hair outside the window picked arithmetically.
        if (!in_window(level, n_levels, s)) {
            if (level > 1 && in_window(level - 1, n_levels, s)) {
                --level;
            } else if (level < n_levels && in_window(level + 1, n_levels, s)) {
                ++level;
            }
        }
        q.encoding.level[i] = std::uint32_t(level - 1);
        q.encoding.weight[i] = 1.0 - std::abs(q.levels[level - 1] - s);
    }
    return q;
}

std::vector<double> count(const Encoding& e) {
    std::vector<double> c(e.levels, 0.0);
    for (std::size_t i = 0; i < e.pixels(); ++i) c[e.level[i]] += e.weight[i];
    const double total = std::accumulate(c.begin(), c.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::DegenerateQuantization, "encoding has no mass");
    for (double& v : c) v /= total;
    return c;
}

double clipped_mass(std::span<const double> hist, double theta) {
    check_theta(theta);
    if (hist.empty()) return 0.0;
    const double cap = theta * *std::max_element(hist.begin(), hist.end());
    double extra = 0.0;
    for (double v : hist) extra += std::max(v - cap, 0.0);
    return extra;
}

std::vector<double> denoise(std::span<const double> hist, double theta) {
    check_theta(theta);
    if (hist.empty()) throw Error(ErrorCode::InvalidArgument, "empty histogram");
    const double cap = theta * *std::max_element(hist.begin(), hist.end());
    const double share = clipped_mass(hist, theta) / double(hist.size());
    std::vector<double> out(hist.size());
    for (std::size_t n = 0; n < hist.size(); ++n) {
        out[n] = (hist[n] > cap ? cap : hist[n]) + share;
    }
    return out;
}

Mlp Mlp::load(const WeightSet& weights, const std::string& prefix, std::size_t in_dim) {
    const FeatureMap& w1 = weights.get(prefix + ".w1");
    const std::size_t hidden = w1.height();
    const FeatureMap& w2 = weights.get(prefix + ".w2");
    const std::size_t out = w2.height();

    Mlp m;
    m.w1 = to_matrix(weights.matrix(prefix + ".w1", hidden, in_dim));
    m.b1 = to_vector(weights.vector(prefix + ".b1", hidden));
    m.w2 = to_matrix(weights.matrix(prefix + ".w2", out, hidden));
    m.b2 = to_vector(weights.vector(prefix + ".b2", out));
    return m;
}

Matrix Mlp::forward_rows(const Matrix& x) const {
    if (x.cols() != w1.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "MLP input width does not match w1");
    }
    Matrix h = (x * w1.transpose()).rowwise() + b1.transpose();
    h = h.unaryExpr([](double v) { return v >= 0.0 ? v : kLeakySlope * v; });
    return (h * w2.transpose()).rowwise() + b2.transpose();
}

Matrix build_stat_feature(std::span<const double> levels, std::span<const double> denoised,
                          std::span<const double> mean, const WeightSet& weights) {
    if (levels.size() != denoised.size() || levels.empty()) {
        throw Error(ErrorCode::ShapeMismatch, "levels and counts must have the same length");
    }
    const auto n = Eigen::Index(levels.size());
    Matrix input(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        input(i, 0) = levels[std::size_t(i)];
        input(i, 1) = denoised[std::size_t(i)];
    }
    const Mlp mlp = Mlp::load(weights, "tiem.mlp", 2);
    const Matrix lifted = mlp.forward_rows(input);

    const auto c = Eigen::Index(mean.size());
    Matrix d(n, lifted.cols() + c);
    d.leftCols(lifted.cols()) = lifted;
    for (Eigen::Index j = 0; j < c; ++j) d.col(lifted.cols() + j).setConstant(mean[std::size_t(j)]);
    return d;
}

Matrix softmax_columns(const Matrix& a) {
    Matrix out(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const double top = a.col(j).maxCoeff();
        out.col(j) = (a.col(j).array() - top).exp().matrix();
        out.col(j) /= out.col(j).sum();
    }
    return out;
}

StatFeature equalize(const Matrix& features, const Encoding& e, std::size_t height,
                     std::size_t width, const WeightSet& weights) {
    const auto n = std::size_t(features.rows());
    const auto c1 = std::size_t(features.cols());
    if (e.levels != n) throw Error(ErrorCode::ShapeMismatch, "encoding levels differ from D rows");
    if (e.pixels() != height * width) {
        throw Error(ErrorCode::ShapeMismatch, "encoding pixel count differs from region size");
    }
    const std::size_t c2 = weights.get("tiem.phi1").height();
    const Matrix phi1 = to_matrix(weights.matrix("tiem.phi1", c2, c1));
    const Matrix phi2 = to_matrix(weights.matrix("tiem.phi2", c2, c1));
    const Matrix phi3 = to_matrix(weights.matrix("tiem.phi3", c2, c1));

    StatFeature out{features, {}, {}, FeatureMap(Shape{c2, height, width})};
    const Matrix query = features * phi1.transpose();
    const Matrix key = features * phi2.transpose();
    out.adjacency = softmax_columns(query * key.transpose());
    out.levels = out.adjacency * (features * phi3.transpose());

    const std::size_t plane = height * width;
    auto r = out.reconstructed.data();
    for (std::size_t i = 0; i < plane; ++i) {
        const auto row = Eigen::Index(e.level[i]);
        for (std::size_t c = 0; c < c2; ++c) {
            r[c * plane + i] = float(out.levels(row, Eigen::Index(c)) * e.weight[i]);
        }
    }
    return out;
}

TiemResult tiem_forward(const FeatureMap& region, const TiemConfig& cfg, const WeightSet& weights) {
    check_theta(cfg.theta);
    TiemResult r;
    r.similarity = self_similarity(region);
    r.quantization = quantize(r.similarity.values, cfg.n_levels);
    r.counting.theta = cfg.theta;
    r.counting.counts = count(r.quantization.encoding);
    r.counting.denoised = denoise(r.counting.counts, cfg.theta);
    const Matrix d = build_stat_feature(r.quantization.levels, r.counting.denoised,
                                        r.similarity.mean, weights);
    r.stat = equalize(d, r.quantization.encoding, region.height(), region.width(), weights);
    return r;
}

WeightSet default_weights(std::size_t channels, std::size_t n_steps,
                          const DefaultWeightDims& dims) {
    if (channels == 0 || n_steps == 0) {
        throw Error(ErrorCode::InvalidArgument, "default weights need channels and steps");
    }
    Rng rng(42);
    WeightSet w;
    add_mlp(w, rng, "tiem.mlp", 2, dims.tiem_hidden, dims.tiem_out);
    const std::size_t c1 = dims.tiem_out + channels;
    for (const char* name : {"tiem.phi1", "tiem.phi2", "tiem.phi3"}) {
        w.add(name, xavier(rng, dims.tiem_levels, c1));
    }
    add_mlp(w, rng, "ctiem.mlp", 3, dims.ctiem_hidden, dims.ctiem_out);
    add_mlp(w, rng, "ctiem.adapt", n_steps * (dims.ctiem_out + channels), dims.adapt_hidden,
            dims.adapt_out);
    return w;
}

std::vector<float> mass_preserving_floats(std::span<const double> hist) {
    std::vector<float> out(hist.size());
    double target = 0.0, got = 0.0;
    for (std::size_t i = 0; i < hist.size(); ++i) {
        out[i] = float(hist[i]);
        target += hist[i];
        got += double(out[i]);
    }
    std::vector<std::size_t> order(hist.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return hist[a] < hist[b]; });

    double residue = target - got;
    for (std::size_t i : order) {
        if (std::abs(residue) <= 1e-12) break;
        if (out[i] == 0.0f) continue;
        const float moved = float(double(out[i]) + residue);
        if (moved < 0.0f) continue;
        residue -= double(moved) - double(out[i]);
        out[i] = moved;
    }
    return out;
}

Matrix to_matrix(const FeatureMap& m) {
    if (m.channels() != 1) throw Error(ErrorCode::ShapeMismatch, "matrix tensors have one channel");
    Matrix out(Eigen::Index(m.height()), Eigen::Index(m.width()));
    for (std::size_t r = 0; r < m.height(); ++r) {
        for (std::size_t c = 0; c < m.width(); ++c) {
            out(Eigen::Index(r), Eigen::Index(c)) = m.at(0, r, c);
        }
    }
    return out;
}

FeatureMap from_matrix(const Matrix& m) {
    FeatureMap out(Shape{1, std::size_t(m.rows()), std::size_t(m.cols())});
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out.at(0, std::size_t(r), std::size_t(c)) = float(m(r, c));
        }
    }
    return out;
}

} // namespace texturekit
