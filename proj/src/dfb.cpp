#include <texturekit/dfb.hpp>

#include <texturekit/error.hpp>
#include <texturekit/parallel.hpp>

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>

namespace texturekit {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW's planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!p) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p) {}
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    fftw_plan get() const noexcept { return plan_; }

private:
    fftw_plan plan_;
};

// Normalized (not yet symmetrized) wedge weights at one frequency.
void wedge_weights(double f_row, double f_col, double transition, std::span<double> out) {
    const std::size_t count = out.size();
    if (f_row == 0.0 && f_col == 0.0) {
        for (double& w : out) w = 1.0 / double(count);
        return;
    }
    double phi = std::atan2(f_row, f_col);
    if (phi < 0) phi += kPi;
    if (phi >= kPi) phi -= kPi;

    const double sector = kPi / double(count);
    const double half = 0.5 * sector;
    const double t = transition * kPi;
    if (t == 0.0) {
        double rel = std::fmod(phi - kPi / 4, kPi);
        if (rel < 0) rel += kPi;
        const auto owner = std::min(count - 1, std::size_t(rel / sector));
        for (std::size_t k = 0; k < count; ++k) out[k] = k == owner ? 1.0 : 0.0;
        return;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double center = kPi / 4 + (double(k) + 0.5) * sector;
        // signed distance on the orientation circle, in [-pi/2, pi/2)
        double d = std::fmod(phi - center + kPi / 2, kPi);
        if (d < 0) d += kPi;
        d -= kPi / 2;

        double w;
        const double a = std::abs(d);
        if (a <= half - t / 2) {
            w = 1.0;
        } else if (a >= half + t / 2) {
            w = 0.0;
        } else {
            const double c = std::cos(0.5 * kPi * (a - (half - t / 2)) / t);
            w = c * c;
        }
        out[k] = w;
        total += w;
    }
    for (double& w : out) w /= total;
}

// Symmetrized mask values for bin (ky, kx) written to out[k].
void bin_masks(std::size_t ky, std::size_t kx, std::size_t h, std::size_t w,
               const DfbConfig& cfg, std::span<double> out, std::span<double> scratch) {
    wedge_weights(bin_frequency(ky, h), bin_frequency(kx, w), cfg.transition_width, out);
    const std::size_t my = (h - ky) % h, mx = (w - kx) % w;
    wedge_weights(bin_frequency(my, h), bin_frequency(mx, w), cfg.transition_width, scratch);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (out[k] + scratch[k]);
}

} // namespace

void DfbConfig::validate(std::size_t height, std::size_t width) const {
    if (levels == 0 || levels > 16) {
        throw Error(ErrorCode::InvalidArgument, "DFB levels must be in [1, 16]");
    }
    if (!(transition_width >= 0.0 && transition_width < 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "DFB transition width must be in [0, 0.5)");
    }
    const std::size_t n = subband_count();
    if (height < n || width < n) {
        throw Error(ErrorCode::InvalidArgument,
                    "input " + std::to_string(height) + "x" + std::to_string(width) +
                        " too small for " + std::to_string(n) + " directional subbands");
    }
}

DirectionGroup direction_group(std::size_t subband, unsigned levels) noexcept {
    return subband < (std::size_t{1} << (levels - 1)) ? DirectionGroup::Vertical
                                                      : DirectionGroup::Horizontal;
}

double bin_frequency(std::size_t k, std::size_t n) noexcept {
    return 2 * k < n ? double(k) / double(n) : (double(k) - double(n)) / double(n);
}

std::vector<std::vector<double>> dfb_masks(std::size_t height, std::size_t width,
                                           const DfbConfig& cfg) {
    cfg.validate(height, width);
    const std::size_t count = cfg.subband_count();
    std::vector<std::vector<double>> masks(count, std::vector<double>(height * width));
    std::vector<double> vals(count), scratch(count);
    for (std::size_t ky = 0; ky < height; ++ky) {
        for (std::size_t kx = 0; kx < width; ++kx) {
            bin_masks(ky, kx, height, width, cfg, vals, scratch);
            for (std::size_t k = 0; k < count; ++k) masks[k][ky * width + kx] = vals[k];
        }
    }
    return masks;
}

std::vector<FeatureMap> dfb_decompose(const FeatureMap& high, const DfbConfig& cfg) {
    const std::size_t h = high.height(), w = high.width();
    cfg.validate(h, w);
    const std::size_t count = cfg.subband_count();
    const std::size_t half_w = w / 2 + 1;
    const std::size_t bins = h * half_w;

    // Masks on the r2c half grid, bin-major: mask[bin * count + k].
    std::vector<double> mask(bins * count);
    {
        std::vector<double> scratch(count);
        for (std::size_t ky = 0; ky < h; ++ky) {
            for (std::size_t kx = 0; kx < half_w; ++kx) {
                const std::size_t bin = ky * half_w + kx;
                bin_masks(ky, kx, h, w, cfg,
                          std::span<double>(mask).subspan(bin * count, count), scratch);
            }
        }
    }

    auto real_buf = fftw_alloc<double>(h * w);
    auto spec_buf = fftw_alloc<fftw_complex>(bins);
    std::unique_ptr<Plan> forward, inverse;
    {
        std::lock_guard lock(planner_mutex());
        forward = std::make_unique<Plan>(fftw_plan_dft_r2c_2d(
            int(h), int(w), real_buf.get(), spec_buf.get(), FFTW_ESTIMATE));
        inverse = std::make_unique<Plan>(fftw_plan_dft_c2r_2d(
            int(h), int(w), spec_buf.get(), real_buf.get(), FFTW_ESTIMATE));
    }

    std::vector<FeatureMap> subbands(count, FeatureMap(high.shape()));
    const double norm = 1.0 / double(h * w);

    parallel_for(high.channels(), [&](std::size_t c) {
        auto spatial = fftw_alloc<double>(h * w);
        auto spectrum = fftw_alloc<fftw_complex>(bins);
        auto product = fftw_alloc<fftw_complex>(bins);

        auto src = high.channel(c);
        for (std::size_t i = 0; i < h * w; ++i) spatial[i] = src[i];
        fftw_execute_dft_r2c(forward->get(), spatial.get(), spectrum.get());

        for (std::size_t k = 0; k < count; ++k) {
            for (std::size_t b = 0; b < bins; ++b) {
                const double m = mask[b * count + k];
                product[b][0] = spectrum[b][0] * m;
                product[b][1] = spectrum[b][1] * m;
            }
            fftw_execute_dft_c2r(inverse->get(), product.get(), spatial.get());
            auto dst = subbands[k].channel(c);
            for (std::size_t i = 0; i < h * w; ++i) dst[i] = float(spatial[i] * norm);
        }
    });
    return subbands;
}

FeatureMap dfb_reconstruct(const std::vector<FeatureMap>& subbands) {
    if (subbands.empty()) throw Error(ErrorCode::InvalidArgument, "no subbands to reconstruct");
    if (!std::has_single_bit(subbands.size())) {
        throw Error(ErrorCode::InvalidArgument, "subband count must be a power of two");
    }
    const Shape shape = subbands.front().shape();
    for (const auto& s : subbands) {
        if (s.shape() != shape) throw Error(ErrorCode::ShapeMismatch, "subband dims differ");
    }
    if (subbands.size() == 1) return subbands.front();

    std::vector<double> acc(shape.size(), 0.0);
    for (const auto& s : subbands) {
        auto d = s.data();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += d[i];
    }
    std::vector<float> out(acc.begin(), acc.end());
    return FeatureMap(shape, std::move(out));
}

} // namespace texturekit
