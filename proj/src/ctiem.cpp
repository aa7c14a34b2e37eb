#include <texturekit/ctiem.hpp>

#include <texturekit/error.hpp>
#include <texturekit/parallel.hpp>

#include <numeric>
#include <string>

namespace texturekit {

namespace {

void check_pairs(const Encoding& e, std::size_t height, std::size_t width, std::size_t step) {
    if (e.pixels() != height * width) {
        throw Error(ErrorCode::ShapeMismatch, "encoding does not cover a height x width map");
    }
    if (step == 0 || step >= width) {
        throw Error(ErrorCode::InvalidArgument, "step " + std::to_string(step) +
                                                    " must be in [1, width) for width " +
                                                    std::to_string(width));
    }
}

std::vector<double> normalized(std::vector<double> cells) {
    const double total = std::accumulate(cells.begin(), cells.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::DegenerateQuantization, "co-occurrence has no mass");
    for (double& v : cells) v /= total;
    return cells;
}

} // namespace

Cooccurrence cooccur(const Encoding& e, std::size_t height, std::size_t width, std::size_t step) {
    check_pairs(e, height, width, step);
    Cooccurrence out{e.levels, height, width, step, {}};
    out.entries.reserve(height * (width - step));
    for (std::size_t i = 0; i < height; ++i) {
        for (std::size_t j = 0; j + step < width; ++j) {
            const std::size_t a = i * width + j, b = a + step;
            out.entries.push_back(
                PairEntry{i, j, e.level[a], e.level[b], e.weight[a] * e.weight[b]});
        }
    }
    return out;
}

std::vector<double> cooccur_count(const Cooccurrence& pairs) {
    std::vector<double> cells(pairs.levels * pairs.levels, 0.0);
    for (const PairEntry& p : pairs.entries) cells[p.first * pairs.levels + p.second] += p.weight;
    return normalized(std::move(cells));
}

std::vector<double> cooccur_count(const Encoding& e, std::size_t height, std::size_t width,
                                  std::size_t step) {
    check_pairs(e, height, width, step);
    const std::size_t cells = e.levels * e.levels;
    // Per-row partials, reduced in row order.
    std::vector<std::vector<double>> rows(height, std::vector<double>(cells, 0.0));
    parallel_for(height, [&](std::size_t i) {
        auto& acc = rows[i];
        for (std::size_t j = 0; j + step < width; ++j) {
            const std::size_t a = i * width + j, b = a + step;
            acc[e.level[a] * e.levels + e.level[b]] += e.weight[a] * e.weight[b];
        }
    });
    std::vector<double> total(cells, 0.0);
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < cells; ++k) total[k] += r[k];
    }
    return normalized(std::move(total));
}

std::vector<double> cooccur_denoise(std::span<const double> counts, double theta) {
    return denoise(counts, theta);
}

Matrix cooccur_stat(std::span<const double> levels, const std::vector<std::vector<double>>& denoised,
                    std::span<const double> mean, const WeightSet& weights) {
    const std::size_t n = levels.size();
    if (n == 0 || denoised.empty()) throw Error(ErrorCode::InvalidArgument, "no co-occurrence input");
    const Mlp mlp = Mlp::load(weights, "ctiem.mlp", 3);
    const auto cells = Eigen::Index(n * n);
    const auto out_dim = Eigen::Index(mlp.out_dim());
    const auto c = Eigen::Index(mean.size());
    const Eigen::Index block = out_dim + c;

    Matrix d(block * Eigen::Index(denoised.size()), cells);
    for (std::size_t s = 0; s < denoised.size(); ++s) {
        if (denoised[s].size() != n * n) {
            throw Error(ErrorCode::ShapeMismatch, "co-occurrence counts must have N^2 cells");
        }
        Matrix input(cells, 3);
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t k = 0; k < n; ++k) {
                const auto cell = Eigen::Index(m * n + k);
                input(cell, 0) = levels[m];
                input(cell, 1) = levels[k];
                input(cell, 2) = denoised[s][m * n + k];
            }
        }
        const Matrix lifted = mlp.forward_rows(input);  // cells x out_dim
        const Eigen::Index base = block * Eigen::Index(s);
        d.middleRows(base, out_dim) = lifted.transpose();
        for (Eigen::Index j = 0; j < c; ++j) d.row(base + out_dim + j).setConstant(mean[std::size_t(j)]);
    }
    return d;
}

Texture adapt(const Matrix& stat, std::size_t height, std::size_t width, const WeightSet& weights) {
    const Mlp mlp = Mlp::load(weights, "ctiem.adapt", std::size_t(stat.rows()));
    Texture out{mlp.forward_rows(stat.transpose()).transpose(), {}, FeatureMap(Shape{mlp.out_dim(), height, width})};
    const Vector mean = out.adapted.rowwise().mean();
    out.t.assign(mean.begin(), mean.end());
    for (std::size_t c = 0; c < out.t.size(); ++c) {
        auto plane = out.map.channel(c);
        std::fill(plane.begin(), plane.end(), float(out.t[c]));
    }
    return out;
}

CtiemResult ctiem_forward(const FeatureMap& a, const CtiemConfig& cfg, const WeightSet& weights) {
    if (cfg.steps.empty()) throw Error(ErrorCode::InvalidArgument, "at least one step is required");
    CtiemResult r;
    r.similarity = self_similarity(a);
    r.quantization = quantize(r.similarity.values, cfg.n_levels);
    for (std::size_t step : cfg.steps) {
        r.counts.push_back(cooccur_count(r.quantization.encoding, a.height(), a.width(), step));
        r.denoised.push_back(cooccur_denoise(r.counts.back(), cfg.theta));
    }
    r.stat = cooccur_stat(r.quantization.levels, r.denoised, r.similarity.mean, weights);
    r.texture = adapt(r.stat, a.height(), a.width(), weights);
    return r;
}

} // namespace texturekit
