#include <texturekit/pyramid.hpp>

#include <texturekit/error.hpp>
#include <texturekit/parallel.hpp>

#include <cmath>
#include <numeric>
#include <string>

namespace texturekit {

namespace {

using Plane = std::vector<double>;

void check_kernel(const std::vector<double>& k, const char* name) {
    if (k.empty() || k.size() % 2 == 0) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " kernel must have odd length");
    }
    const double dc = std::accumulate(k.begin(), k.end(), 0.0);
    if (std::abs(dc - 1.0) > 1e-6) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string(name) + " kernel coefficients must sum to 1");
    }
}

// Filtered-then-decimated plane: out[y'][x'] = sum_ij k_i k_j in[p y' + i - r][p x' + j - r].
Plane filter_decimate(std::span<const float> in, std::ptrdiff_t h, std::ptrdiff_t w,
                      const std::vector<double>& k, std::ptrdiff_t p) {
    const std::ptrdiff_t r = std::ptrdiff_t(k.size() / 2);
    const std::ptrdiff_t oh = h / p, ow = w / p;
    Plane rows(std::size_t(h * ow));
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t xo = 0; xo < ow; ++xo) {
            double acc = 0.0;
            for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(k.size()); ++j) {
                acc += k[j] * in[y * w + reflect_index(p * xo + j - r, w)];
            }
            rows[y * ow + xo] = acc;
        }
    }
    Plane out(std::size_t(oh * ow));
    for (std::ptrdiff_t yo = 0; yo < oh; ++yo) {
        for (std::ptrdiff_t xo = 0; xo < ow; ++xo) {
            double acc = 0.0;
            for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(k.size()); ++i) {
                acc += k[i] * rows[reflect_index(p * yo + i - r, h) * ow + xo];
            }
            out[yo * ow + xo] = acc;
        }
    }
    return out;
}

// Zero-insert `low` (lh x lw) onto an h x w grid and filter with p * k per axis.
Plane expand_plane(std::span<const float> low, std::ptrdiff_t lh, std::ptrdiff_t lw,
                   std::ptrdiff_t h, std::ptrdiff_t w, const std::vector<double>& k,
                   std::ptrdiff_t p) {
    const std::ptrdiff_t r = std::ptrdiff_t(k.size() / 2);
    const double gain = double(p);

    // Horizontal pass on the lh nonzero rows only.
    Plane rows(std::size_t(lh * w), 0.0);
    for (std::ptrdiff_t yl = 0; yl < lh; ++yl) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(k.size()); ++j) {
                const std::ptrdiff_t sx = reflect_index(x + j - r, w);
                if (sx % p == 0 && sx / p < lw) acc += k[j] * low[yl * lw + sx / p];
            }
            rows[yl * w + x] = gain * acc;
        }
    }
    Plane out(std::size_t(h * w), 0.0);
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(k.size()); ++i) {
                const std::ptrdiff_t sy = reflect_index(y + i - r, h);
                if (sy % p == 0 && sy / p < lh) acc += k[i] * rows[(sy / p) * w + x];
            }
            out[y * w + x] = gain * acc;
        }
    }
    return out;
}

void require_divisible(const FeatureMap& x, std::size_t p) {
    if (x.height() < p || x.width() < p || x.height() % p != 0 || x.width() % p != 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "spatial dims " + std::to_string(x.height()) + "x" +
                        std::to_string(x.width()) + " are not positive multiples of " +
                        std::to_string(p) + "; reflect_pad the input first");
    }
}

} // namespace

LpConfig LpConfig::burt_adelson() {
    const std::vector<double> k{0.0625, 0.25, 0.375, 0.25, 0.0625};
    return LpConfig{k, k, 2};
}

void LpConfig::validate() const {
    check_kernel(analysis, "analysis");
    check_kernel(synthesis, "synthesis");
    if (factor < 2) throw Error(ErrorCode::InvalidArgument, "downsample factor must be >= 2");
}

std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) noexcept {
    if (n == 1) return 0;
    const std::ptrdiff_t period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

FeatureMap reflect_pad(const FeatureMap& x, std::size_t multiple) {
    if (multiple == 0) throw Error(ErrorCode::InvalidArgument, "pad multiple must be positive");
    auto round_up = [&](std::size_t v) { return (v + multiple - 1) / multiple * multiple; };
    const std::size_t h = round_up(x.height()), w = round_up(x.width());
    if (h == x.height() && w == x.width()) return x;

    FeatureMap out(Shape{x.channels(), h, w});
    const auto sh = std::ptrdiff_t(x.height()), sw = std::ptrdiff_t(x.width());
    for (std::size_t c = 0; c < x.channels(); ++c) {
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t xx = 0; xx < w; ++xx) {
                out.at(c, y, xx) = x.at(c, reflect_index(std::ptrdiff_t(y), sh),
                                        reflect_index(std::ptrdiff_t(xx), sw));
            }
        }
    }
    return out;
}

FeatureMap convolve_separable(const FeatureMap& x, const std::vector<double>& kernel) {
    if (kernel.empty() || kernel.size() % 2 == 0) {
        throw Error(ErrorCode::InvalidArgument, "kernel must have odd length");
    }
    // A factor-1 decimation is plain filtering.
    FeatureMap out(x.shape());
    const auto h = std::ptrdiff_t(x.height()), w = std::ptrdiff_t(x.width());
    for (std::size_t c = 0; c < x.channels(); ++c) {
        const Plane plane = filter_decimate(x.channel(c), h, w, kernel, 1);
        auto dst = out.channel(c);
        for (std::size_t i = 0; i < plane.size(); ++i) dst[i] = float(plane[i]);
    }
    return out;
}

LpLevel lp_analyze(const FeatureMap& x, const LpConfig& cfg) {
    cfg.validate();
    require_divisible(x, cfg.factor);
    const auto p = std::ptrdiff_t(cfg.factor);
    const auto h = std::ptrdiff_t(x.height()), w = std::ptrdiff_t(x.width());
    const std::ptrdiff_t lh = h / p, lw = w / p;

    LpLevel out{FeatureMap(Shape{x.channels(), std::size_t(lh), std::size_t(lw)}),
                FeatureMap(x.shape())};
    parallel_for(x.channels(), [&](std::size_t c) {
        const Plane low = filter_decimate(x.channel(c), h, w, cfg.analysis, p);
        auto low_dst = out.low.channel(c);
        for (std::size_t i = 0; i < low.size(); ++i) low_dst[i] = float(low[i]);

        // Predict from the stored (float) low band so synthesis sees the same values.
        const Plane pred = expand_plane(out.low.channel(c), lh, lw, h, w, cfg.synthesis, p);
        auto src = x.channel(c);
        auto high_dst = out.high.channel(c);
        for (std::size_t i = 0; i < pred.size(); ++i) {
            high_dst[i] = float(double(src[i]) - pred[i]);
        }
    });
    return out;
}

FeatureMap lp_expand(const FeatureMap& low, std::size_t height, std::size_t width,
                     const LpConfig& cfg) {
    cfg.validate();
    if (low.height() * cfg.factor != height || low.width() * cfg.factor != width) {
        throw Error(ErrorCode::ShapeMismatch, "low band must be the target size divided by p");
    }
    FeatureMap out(Shape{low.channels(), height, width});
    for (std::size_t c = 0; c < low.channels(); ++c) {
        const Plane pred = expand_plane(low.channel(c), std::ptrdiff_t(low.height()),
                                        std::ptrdiff_t(low.width()), std::ptrdiff_t(height),
                                        std::ptrdiff_t(width), cfg.synthesis,
                                        std::ptrdiff_t(cfg.factor));
        auto dst = out.channel(c);
        for (std::size_t i = 0; i < pred.size(); ++i) dst[i] = float(pred[i]);
    }
    return out;
}

FeatureMap lp_synthesize(const FeatureMap& low, const FeatureMap& high, const LpConfig& cfg) {
    cfg.validate();
    if (low.channels() != high.channels() || low.height() * cfg.factor != high.height() ||
        low.width() * cfg.factor != high.width()) {
        throw Error(ErrorCode::ShapeMismatch, "lp_synthesize: low must be high dims / p");
    }
    const auto p = std::ptrdiff_t(cfg.factor);
    FeatureMap out(high.shape());
    parallel_for(high.channels(), [&](std::size_t c) {
        const Plane pred = expand_plane(low.channel(c), std::ptrdiff_t(low.height()),
                                        std::ptrdiff_t(low.width()),
                                        std::ptrdiff_t(high.height()),
                                        std::ptrdiff_t(high.width()), cfg.synthesis, p);
        auto hi = high.channel(c);
        auto dst = out.channel(c);
        for (std::size_t i = 0; i < pred.size(); ++i) dst[i] = float(double(hi[i]) + pred[i]);
    });
    return out;
}

} // namespace texturekit
