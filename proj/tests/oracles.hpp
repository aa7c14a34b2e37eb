// Brute-force reference implementations used only by the tests. None of
// these call into the library code paths they are compared against.
#pragma once

#include <texturekit/feature_map.hpp>
#include <texturekit/random.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

using texturekit::FeatureMap;
using texturekit::Shape;

inline FeatureMap random_map(texturekit::Rng& rng, Shape shape, double lo = 0.0, double hi = 1.0) {
    std::vector<float> v(shape.size());
    for (float& x : v) x = float(rng.uniform(lo, hi));
    return FeatureMap(shape, std::move(v));
}

// Mirror about the edge samples, written as repeated folding.
inline long reflect(long i, long n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * (n - 1) - i;
    }
    return i;
}

/// Full 2-D correlation with the outer-product kernel, then keep every p-th sample.
inline std::vector<double> filter_decimate_2d(const FeatureMap& x, std::size_t c,
                                              const std::vector<double>& k, long p) {
    const long h = long(x.height()), w = long(x.width()), r = long(k.size() / 2);
    std::vector<double> out;
    for (long yo = 0; yo < h / p; ++yo) {
        for (long xo = 0; xo < w / p; ++xo) {
            double acc = 0.0;
            for (long i = -r; i <= r; ++i) {
                for (long j = -r; j <= r; ++j) {
                    acc += k[i + r] * k[j + r] *
                           x.at(c, std::size_t(reflect(p * yo + i, h)), std::size_t(reflect(p * xo + j, w)));
                }
            }
            out.push_back(acc);
        }
    }
    return out;
}

using Spectrum = std::vector<std::complex<double>>;

/// Naive 2-D DFT, X[ky*w + kx] = sum x[y][x] exp(-2 pi i (ky y / h + kx x / w)).
inline Spectrum dft2(const std::vector<double>& x, std::size_t h, std::size_t w) {
    Spectrum out(h * w);
    for (std::size_t ky = 0; ky < h; ++ky) {
        for (std::size_t kx = 0; kx < w; ++kx) {
            std::complex<double> acc = 0.0;
            for (std::size_t y = 0; y < h; ++y) {
                for (std::size_t xx = 0; xx < w; ++xx) {
                    const double a = -2.0 * std::numbers::pi *
                                     (double(ky * y) / double(h) + double(kx * xx) / double(w));
                    acc += x[y * w + xx] * std::complex<double>(std::cos(a), std::sin(a));
                }
            }
            out[ky * w + kx] = acc;
        }
    }
    return out;
}

inline std::vector<std::complex<double>> idft2(const Spectrum& X, std::size_t h, std::size_t w) {
    std::vector<std::complex<double>> out(h * w);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t xx = 0; xx < w; ++xx) {
            std::complex<double> acc = 0.0;
            for (std::size_t ky = 0; ky < h; ++ky) {
                for (std::size_t kx = 0; kx < w; ++kx) {
                    const double a = 2.0 * std::numbers::pi *
                                     (double(ky * y) / double(h) + double(kx * xx) / double(w));
                    acc += X[ky * w + kx] * std::complex<double>(std::cos(a), std::sin(a));
                }
            }
            out[y * w + xx] = acc / double(h * w);
        }
    }
    return out;
}

/// Gauss-Jordan inverse with partial pivoting, row-major n x n.
inline std::vector<double> invert(std::vector<double> a, std::size_t n) {
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a[col * n + j], a[piv * n + j]);
            std::swap(inv[col * n + j], inv[piv * n + j]);
        }
        const double d = a[col * n + col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col * n + j] /= d;
            inv[col * n + j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r * n + col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r * n + j] -= f * a[col * n + j];
                inv[r * n + j] -= f * inv[col * n + j];
            }
        }
    }
    return inv;
}

/// Row-major (rows x inner) times (inner x cols).
inline std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b,
                                  std::size_t rows, std::size_t inner, std::size_t cols) {
    std::vector<double> out(rows * cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t k = 0; k < inner; ++k) out[i * cols + j] += a[i * inner + k] * b[k * cols + j];
        }
    }
    return out;
}

inline double leaky(double v) { return v > 0 ? v : 0.01 * v; }

/// Nearest level under the half-open window rule: level n (1-based) owns
/// s with -0.5/N <= n/N - s < 0.5/N. Linear scan; ties cannot occur.
inline std::size_t nearest_level(double s, std::size_t n_levels) {
    const double half = 0.5 / double(n_levels);
    for (std::size_t n = 1; n <= n_levels; ++n) {
        const double d = double(n) / double(n_levels) - s;
        if (-half <= d && d < half) return n;
    }
    return 0;
}

/// Population standard deviation of every value in a rect, two-pass.
inline double rect_std(const FeatureMap& a, std::size_t top, std::size_t left, std::size_t h,
                       std::size_t w) {
    double mean = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < a.channels(); ++c) {
        for (std::size_t y = top; y < top + h; ++y) {
            for (std::size_t x = left; x < left + w; ++x, ++n) mean += a.at(c, y, x);
        }
    }
    mean /= double(n);
    double var = 0.0;
    for (std::size_t c = 0; c < a.channels(); ++c) {
        for (std::size_t y = top; y < top + h; ++y) {
            for (std::size_t x = left; x < left + w; ++x) {
                const double d = a.at(c, y, x) - mean;
                var += d * d;
            }
        }
    }
    return std::sqrt(var / double(n));
}

} // namespace oracle
