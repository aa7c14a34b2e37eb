#include <texturekit/sampler.hpp>

#include <texturekit/error.hpp>
#include <texturekit/parallel.hpp>
#include <texturekit/random.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

namespace texturekit {

namespace {

std::size_t round_half_up(double v) { return std::size_t(std::floor(v + 0.5)); }

std::size_t scale_coord(std::size_t v, std::size_t from, std::size_t to) {
    return (2 * v * to + from) / (2 * from);
}

} // namespace

std::size_t SamplerConfig::candidate_count() const {
    return std::size_t(std::ceil(overgen_factor * double(m_samples) - 1e-9));
}

std::size_t SamplerConfig::importance_count() const {
    return std::size_t(std::floor(importance_fraction * double(m_samples) + 1e-9));
}

void SamplerConfig::validate() const {
    if (m_samples == 0) throw Error(ErrorCode::InvalidArgument, "M must be positive");
    if (!(overgen_factor >= 1.0) || !std::isfinite(overgen_factor)) {
        throw Error(ErrorCode::InvalidArgument, "over-generation factor k must be >= 1");
    }
    if (!(importance_fraction >= 0.0 && importance_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "importance fraction beta must lie in [0, 1]");
    }
    if (candidate_count() < m_samples) {
        throw Error(ErrorCode::InvalidArgument, "ceil(k*M) is smaller than M");
    }
    for (double s : anchor_scales) {
        if (!(s >= 1.0) || !std::isfinite(s)) {
            throw Error(ErrorCode::InvalidArgument, "anchor scales must be >= 1");
        }
    }
    for (double r : anchor_ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw Error(ErrorCode::InvalidArgument, "anchor ratios must be positive");
        }
    }
}

std::array<Rect, 9> anchor_rects(std::size_t row, std::size_t col, std::size_t height,
                                 std::size_t width, const SamplerConfig& cfg) {
    std::array<Rect, 9> out;
    std::size_t i = 0;
    for (double s : cfg.anchor_scales) {
        for (double r : cfg.anchor_ratios) {
            const std::size_t h = std::max<std::size_t>(1, round_half_up(s * std::sqrt(r)));
            const std::size_t w = std::max<std::size_t>(1, round_half_up(s / std::sqrt(r)));
            const auto top = std::ptrdiff_t(row) - std::ptrdiff_t(h / 2);
            const auto left = std::ptrdiff_t(col) - std::ptrdiff_t(w / 2);
            const auto t0 = std::max<std::ptrdiff_t>(top, 0);
            const auto l0 = std::max<std::ptrdiff_t>(left, 0);
            const auto t1 = std::min<std::ptrdiff_t>(top + std::ptrdiff_t(h), std::ptrdiff_t(height));
            const auto l1 = std::min<std::ptrdiff_t>(left + std::ptrdiff_t(w), std::ptrdiff_t(width));
            out[i++] = Rect{std::size_t(t0), std::size_t(l0), std::size_t(t1 - t0),
                            std::size_t(l1 - l0)};
        }
    }
    return out;
}

RectStats::RectStats(const FeatureMap& a)
    : height_(a.height()), width_(a.width()), channels_(a.channels()),
      sum_((a.height() + 1) * (a.width() + 1), 0.0),
      sum_sq_((a.height() + 1) * (a.width() + 1), 0.0) {
    double mean = 0.0;
    for (float v : a.data()) mean += v;
    mean /= double(a.size());

    const std::size_t stride = width_ + 1;
    for (std::size_t y = 0; y < height_; ++y) {
        double row = 0.0, row_sq = 0.0;
        for (std::size_t x = 0; x < width_; ++x) {
            for (std::size_t c = 0; c < channels_; ++c) {
                const double v = double(a.at(c, y, x)) - mean;
                row += v;
                row_sq += v * v;
            }
            sum_[(y + 1) * stride + x + 1] = sum_[y * stride + x + 1] + row;
            sum_sq_[(y + 1) * stride + x + 1] = sum_sq_[y * stride + x + 1] + row_sq;
        }
    }
}

double RectStats::stddev(const Rect& r) const {
    if (r.height == 0 || r.width == 0) return 0.0;
    const std::size_t stride = width_ + 1;
    auto box = [&](const std::vector<double>& t) {
        const std::size_t y0 = r.top, y1 = r.top + r.height;
        const std::size_t x0 = r.left, x1 = r.left + r.width;
        return t[y1 * stride + x1] - t[y0 * stride + x1] - t[y1 * stride + x0] + t[y0 * stride + x0];
    };
    const double n = double(r.height * r.width * channels_);
    const double mean = box(sum_) / n;
    const double var = box(sum_sq_) / n - mean * mean;
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

std::vector<RegionSample> sample_regions(const FeatureMap& a, const SamplerConfig& cfg) {
    cfg.validate();
    const std::size_t h = a.height(), w = a.width();
    const double smallest = *std::min_element(cfg.anchor_scales.begin(), cfg.anchor_scales.end());
    if (double(h) < smallest || double(w) < smallest) {
        throw Error(ErrorCode::InvalidArgument, "map " + std::to_string(h) + "x" +
                                                    std::to_string(w) +
                                                    " is smaller than the smallest anchor");
    }
    const std::size_t n_cand = cfg.candidate_count();
    if (n_cand > h * w) {
        throw Error(ErrorCode::InvalidArgument, "more candidates requested than map pixels");
    }

    Rng rng(cfg.seed);

    std::vector<std::size_t> centers;
    centers.reserve(n_cand);
    std::unordered_set<std::size_t> seen;
    while (centers.size() < n_cand) {
        const std::size_t idx = rng.below(h * w);
        if (seen.insert(idx).second) centers.push_back(idx);
    }

    const RectStats stats(a);
    std::vector<double> scores(n_cand);
    parallel_for(n_cand, [&](std::size_t i) {
        double s = 0.0;
        for (const Rect& r : anchor_rects(centers[i] / w, centers[i] % w, h, w, cfg)) {
            s += stats.stddev(r);
        }
        scores[i] = s;
    });

    // Exponential keys: the largest log(u)/w wins. Zero weights rank behind
    // every positive weight and are ordered among themselves by u alone.
    struct Keyed {
        bool positive;
        double key;
        std::size_t index;
    };
    std::vector<Keyed> keyed(n_cand);
    for (std::size_t i = 0; i < n_cand; ++i) {
        const double u = rng.uniform();
        keyed[i] = scores[i] > 0.0 ? Keyed{true, std::log(u) / scores[i], i} : Keyed{false, u, i};
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
        if (x.positive != y.positive) return x.positive;
        return x.key > y.key;
    });

    const std::size_t n_imp = cfg.importance_count();
    std::vector<std::size_t> chosen;
    std::vector<char> taken(n_cand, 0);
    for (std::size_t i = 0; i < n_imp; ++i) {
        chosen.push_back(keyed[i].index);
        taken[keyed[i].index] = 1;
    }

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n_cand; ++i) {
        if (!taken[i]) rest.push_back(i);
    }
    const std::size_t n_cov = cfg.m_samples - n_imp;
    for (std::size_t i = 0; i < n_cov; ++i) {
        const std::size_t j = i + rng.below(rest.size() - i);
        std::swap(rest[i], rest[j]);
        chosen.push_back(rest[i]);
    }

    std::vector<RegionSample> out;
    out.reserve(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const std::size_t c = chosen[i];
        const std::size_t row = centers[c] / w, col = centers[c] % w;
        const auto anchors = anchor_rects(row, col, h, w, cfg);
        out.push_back(RegionSample{row, col, anchors[rng.below(anchors.size())], scores[c],
                                   i < n_imp ? SampleOrigin::Importance : SampleOrigin::Coverage});
    }
    return out;
}

RegionSample scale_region(const RegionSample& r, std::size_t from_height, std::size_t from_width,
                          std::size_t to_height, std::size_t to_width) {
    if (from_height == 0 || from_width == 0 || to_height == 0 || to_width == 0) {
        throw Error(ErrorCode::InvalidArgument, "scale_region needs positive dims");
    }
    RegionSample out = r;
    out.row = std::min(scale_coord(r.row, from_height, to_height), to_height - 1);
    out.col = std::min(scale_coord(r.col, from_width, to_width), to_width - 1);

    Rect& q = out.rect;
    q.top = std::min(scale_coord(r.rect.top, from_height, to_height), to_height - 1);
    q.left = std::min(scale_coord(r.rect.left, from_width, to_width), to_width - 1);
    q.height = std::clamp<std::size_t>(scale_coord(r.rect.height, from_height, to_height), 1,
                                       to_height - q.top);
    q.width = std::clamp<std::size_t>(scale_coord(r.rect.width, from_width, to_width), 1,
                                      to_width - q.left);
    return out;
}

const char* to_string(SampleOrigin origin) noexcept {
    return origin == SampleOrigin::Importance ? "importance" : "coverage";
}

} // namespace texturekit
