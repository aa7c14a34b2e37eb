#include <texturekit/selftest.hpp>

#include <texturekit/cdm.hpp>
#include <texturekit/ctiem.hpp>
#include <texturekit/dfb.hpp>
#include <texturekit/error.hpp>
#include <texturekit/losses.hpp>
#include <texturekit/pyramid.hpp>
#include <texturekit/random.hpp>
#include <texturekit/sampler.hpp>
#include <texturekit/tensor_io.hpp>
#include <texturekit/tiem.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

namespace texturekit {

namespace {

FeatureMap random_map(Rng& rng, Shape shape, double lo = 0.0, double hi = 1.0) {
    std::vector<float> v(shape.size());
    for (float& x : v) x = float(rng.uniform(lo, hi));
    return FeatureMap(shape, std::move(v));
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

CheckResult tensor_round_trip() {
    Rng rng(1);
    const FeatureMap m = random_map(rng, Shape{2, 3, 5}, -10.0, 10.0);
    const auto bytes = encode_tensor(m);
    std::size_t offset = 0;
    const FeatureMap back = decode_tensor(bytes, offset);
    const bool ok = back.shape() == m.shape() && offset == bytes.size() &&
                    std::memcmp(back.data().data(), m.data().data(), m.size() * sizeof(float)) == 0;
    return {"tensor round trip", ok, std::to_string(bytes.size()) + " bytes"};
}

CheckResult lp_reconstruction() {
    Rng rng(2);
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        const FeatureMap x = random_map(rng, Shape{3, 32, 32});
        const LpConfig cfg = LpConfig::burt_adelson();
        const LpLevel lv = lp_analyze(x, cfg);
        worst = std::max(worst, max_abs_diff(lp_synthesize(lv.low, lv.high, cfg), x));
    }
    return {"laplacian pyramid reconstruction", worst < 1e-6, "max error " + fmt(worst)};
}

CheckResult dfb_partition() {
    double worst = 0.0;
    for (unsigned m : {1u, 3u, 4u}) {
        const auto masks = dfb_masks(32, 32, DfbConfig{m, 0.1});
        for (std::size_t b = 0; b < 32 * 32; ++b) {
            double s = 0.0;
            for (const auto& mk : masks) s += mk[b];
            worst = std::max(worst, std::abs(s - 1.0));
        }
    }
    return {"directional masks partition unity", worst < 1e-6, "max deviation " + fmt(worst)};
}

CheckResult dfb_reconstruction() {
    Rng rng(3);
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        const FeatureMap x = random_map(rng, Shape{1, 32, 32}, -1.0, 1.0);
        worst = std::max(worst, max_abs_diff(dfb_reconstruct(dfb_decompose(x, DfbConfig{3, 0.1})), x));
    }
    return {"directional filter bank reconstruction", worst < 1e-5, "max error " + fmt(worst)};
}

CheckResult dfb_selectivity() {
    FeatureMap x(Shape{1, 32, 32});
    for (std::size_t y = 0; y < 32; ++y) {
        for (std::size_t c = 0; c < 32; ++c) {
            x.at(0, y, c) = float(std::cos(2.0 * std::numbers::pi * 4.0 * double(y) / 32.0));
        }
    }
    const auto bands = dfb_decompose(x, DfbConfig{3, 0.1});
    double vertical = 0.0, total = 0.0;
    for (std::size_t k = 0; k < bands.size(); ++k) {
        double e = 0.0;
        for (float v : bands[k].data()) e += double(v) * v;
        total += e;
        if (direction_group(k, 3) == DirectionGroup::Vertical) vertical += e;
    }
    const double ratio = vertical / total;
    return {"directional selectivity", ratio >= 0.95, "vertical share " + fmt(ratio)};
}

CheckResult cdm_shapes() {
    Rng rng(4);
    const StructuralFeature f = cdm_forward(random_map(rng, Shape{2, 32, 32}), CdmConfig{});
    const bool ok = f.levels.size() == 2 && f.levels[0].size() == 16 && f.levels[1].size() == 8 &&
                    f.levels[0][0].shape() == Shape{2, 16, 16} &&
                    f.levels[1][0].shape() == Shape{2, 8, 8};
    return {"contourlet shapes", ok, std::to_string(f.subband_count()) + " subbands"};
}

CheckResult quantization() {
    Rng rng(5);
    std::vector<double> s(1000);
    for (double& v : s) v = rng.uniform(-1.0, 1.0);
    const QuantizationState q = quantize(s, 128);
    const Matrix e = q.encoding.dense();
    bool ok = true;
    for (Eigen::Index i = 0; i < e.cols(); ++i) {
        const auto nz = (e.col(i).array() != 0.0).count();
        ok = ok && nz == 1 && e.col(i).maxCoeff() >= 1.0 - 0.5 / 128.0;
    }
    const auto c = count(q.encoding);
    ok = ok && std::abs(sum(c) - 1.0) <= 1e-9;
    return {"quantization encodes each pixel once", ok, "1000 pixels, N=128"};
}

CheckResult denoising() {
    Rng rng(6);
    bool ok = true;
    for (double theta : {0.5, 0.9, 1.0}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> h(16);
            for (double& v : h) v = rng.uniform();
            const double t = sum(h);
            for (double& v : h) v /= t;
            const auto d = denoise(h, theta);
            const double cap = theta * *std::max_element(h.begin(), h.end()) +
                               clipped_mass(h, theta) / double(h.size());
            ok = ok && std::abs(sum(d) - sum(h)) <= 1e-9 &&
                 *std::max_element(d.begin(), d.end()) <= cap + 1e-9;
        }
    }
    const std::vector<double> hand{0.7, 0.1, 0.1, 0.1};
    ok = ok && denoise(hand, 0.5) == std::vector<double>{0.4375, 0.1875, 0.1875, 0.1875};
    return {"denoising conserves mass", ok, "theta in {0.5, 0.9, 1.0}"};
}

CheckResult cooccurrence() {
    Rng rng(7);
    const FeatureMap a = random_map(rng, Shape{2, 6, 6}, 0.05, 1.0);
    FeatureMap mirrored(a.shape());
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t y = 0; y < 6; ++y) {
            for (std::size_t x = 0; x < 6; ++x) mirrored.at(c, y, x) = a.at(c, y, 5 - x);
        }
    }
    const auto qa = quantize(self_similarity(a).values, 3);
    const auto qm = quantize(self_similarity(mirrored).values, 3);
    double worst = 0.0;
    for (std::size_t step : {1u, 3u}) {
        const auto streamed = cooccur_count(qa.encoding, 6, 6, step);
        const auto listed = cooccur_count(cooccur(qa.encoding, 6, 6, step));
        const auto flipped = cooccur_count(qm.encoding, 6, 6, step);
        for (std::size_t m = 0; m < 3; ++m) {
            for (std::size_t n = 0; n < 3; ++n) {
                worst = std::max(worst, std::abs(streamed[m * 3 + n] - listed[m * 3 + n]));
                worst = std::max(worst, std::abs(streamed[m * 3 + n] - flipped[n * 3 + m]));
            }
        }
    }
    return {"co-occurrence counts and mirror symmetry", worst <= 1e-9, "max deviation " + fmt(worst)};
}

CheckResult sampler() {
    Rng rng(8);
    const FeatureMap a = random_map(rng, Shape{1, 64, 64});
    SamplerConfig cfg;
    cfg.m_samples = 16;
    cfg.seed = 7;
    const auto first = sample_regions(a, cfg);
    const auto second = sample_regions(a, cfg);
    std::vector<std::size_t> centers;
    for (const auto& s : first) centers.push_back(s.row * 64 + s.col);
    std::sort(centers.begin(), centers.end());
    const bool distinct = std::adjacent_find(centers.begin(), centers.end()) == centers.end();
    const bool ok = first == second && first.size() == 16 && distinct;
    return {"sampler determinism", ok, std::to_string(first.size()) + " samples"};
}

CheckResult loss_identities() {
    Rng rng(9);
    const FeatureMap region = random_map(rng, Shape{3, 8, 8});
    const WeightSet w = default_weights(3);
    const TiemResult r = tiem_forward(region, TiemConfig{16, 0.9}, w);
    const QclTerms self = qcl_loss(r.stat, r.stat, 8, 8);

    FeatureMap p(Shape{4, 4, 4});
    for (std::size_t i = 0; i < 16; ++i) {
        double t = 0.0;
        std::vector<double> col(4);
        for (double& v : col) t += (v = rng.uniform());
        for (std::size_t k = 0; k < 4; ++k) p.data()[k * 16 + i] = float(col[k] / t);
    }
    const double kl = response_kl_loss(p, p);
    const double total = total_loss(1, 1, 1, 1, 1);

    Matrix levels(5, 3);
    for (Eigen::Index i = 0; i < levels.size(); ++i) levels.data()[i] = rng.uniform(-1.0, 1.0);
    const auto corr = mahalanobis_corr(levels, Vector::Zero(3), Matrix::Identity(3, 3));
    double worst = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i) {
        worst = std::max(worst, std::abs(corr[std::size_t(i)] - levels.row(i).norm()));
    }
    const bool ok = std::abs(self.l_qdl) <= 1e-9 && kl == 0.0 && total == 5.79 && worst <= 1e-6;
    return {"loss identities", ok, "total " + std::to_string(total)};
}

CheckResult scale_invariance() {
    Rng rng(10);
    FeatureMap region(Shape{3, 8, 8});
    for (float& v : region.data()) v = float(1 + rng.below(255));
    const auto base = tiem_forward(region, TiemConfig{32, 0.9}, default_weights(3));
    bool ok = true;
    for (float c : {0.5f, 2.0f, 10.0f}) {
        const auto r = tiem_forward(scale(region, c), TiemConfig{32, 0.9}, default_weights(3));
        ok = ok && r.similarity.values == base.similarity.values &&
             r.quantization.encoding.level == base.quantization.encoding.level &&
             r.quantization.encoding.weight == base.quantization.encoding.weight &&
             r.counting.counts == base.counting.counts &&
             r.counting.denoised == base.counting.denoised;
    }
    return {"statistical path scale invariance", ok, "c in {0.5, 2, 10}"};
}

} // namespace

std::vector<CheckResult> run_selftest() {
    const std::vector<std::pair<const char*, std::function<CheckResult()>>> checks{
        {"tensor", tensor_round_trip},
        {"pyramid", lp_reconstruction},
        {"dfb partition", dfb_partition},
        {"dfb reconstruction", dfb_reconstruction},
        {"dfb selectivity", dfb_selectivity},
        {"cdm", cdm_shapes},
        {"quantize", quantization},
        {"denoise", denoising},
        {"cooccur", cooccurrence},
        {"sampler", sampler},
        {"losses", loss_identities},
        {"scale invariance", scale_invariance},
    };
    std::vector<CheckResult> out;
    for (const auto& [name, check] : checks) {
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({name, false, e.what()});
        }
    }
    return out;
}

} // namespace texturekit
