#include <texturekit/cdm.hpp>

#include <texturekit/error.hpp>

#include <string>

namespace texturekit {

void CdmConfig::validate(std::size_t height, std::size_t width) const {
    if (dfb_levels.empty()) throw Error(ErrorCode::InvalidArgument, "CDM needs at least one stage");
    lp.validate();
    std::size_t h = height, w = width;
    for (unsigned m : dfb_levels) {
        if (h % lp.factor != 0 || w % lp.factor != 0 || h < lp.factor || w < lp.factor) {
            throw Error(ErrorCode::InvalidArgument,
                        "input dims must be divisible by p^num_levels; reflect_pad first");
        }
        h /= lp.factor;
        w /= lp.factor;
        DfbConfig{m, transition_width}.validate(h, w);
    }
}

std::size_t StructuralFeature::subband_count() const noexcept {
    std::size_t n = 0;
    for (const auto& level : levels) n += level.size();
    return n;
}

std::vector<float> StructuralFeature::flatten() const {
    std::vector<float> out;
    for (const auto& level : levels) {
        for (const auto& band : level) out.insert(out.end(), band.data().begin(), band.data().end());
    }
    return out;
}

FeatureMap decimate(const FeatureMap& x, std::size_t p) {
    if (p == 0 || x.height() % p != 0 || x.width() % p != 0) {
        throw Error(ErrorCode::InvalidArgument, "decimate: dims not divisible by factor");
    }
    const std::size_t h = x.height() / p, w = x.width() / p;
    FeatureMap out(Shape{x.channels(), h, w});
    for (std::size_t c = 0; c < x.channels(); ++c) {
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t xx = 0; xx < w; ++xx) out.at(c, y, xx) = x.at(c, y * p, xx * p);
        }
    }
    return out;
}

StructuralFeature cdm_forward(const FeatureMap& x, const CdmConfig& cfg) {
    cfg.validate(x.height(), x.width());
    StructuralFeature feature;
    FeatureMap low = x;
    for (unsigned m : cfg.dfb_levels) {
        LpLevel stage = lp_analyze(low, cfg.lp);
        const FeatureMap band = decimate(stage.high, cfg.lp.factor);
        feature.levels.push_back(dfb_decompose(band, DfbConfig{m, cfg.transition_width}));
        low = std::move(stage.low);
    }
    return feature;
}

double structural_loss(const StructuralFeature& teacher, const StructuralFeature& student) {
    if (teacher.levels.size() != student.levels.size() || teacher.levels.empty()) {
        throw Error(ErrorCode::ShapeMismatch, "structural features have different stage counts");
    }
    double total = 0.0;
    for (std::size_t n = 0; n < teacher.levels.size(); ++n) {
        const auto& t = teacher.levels[n];
        const auto& s = student.levels[n];
        if (t.size() != s.size() || t.empty()) {
            throw Error(ErrorCode::ShapeMismatch,
                        "stage " + std::to_string(n) + " subband counts differ");
        }
        double sum = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (t[k].shape() != s[k].shape() || t[k].shape() != t.front().shape()) {
                throw Error(ErrorCode::ShapeMismatch,
                            "stage " + std::to_string(n) + " subband shapes differ");
            }
            auto a = t[k].data();
            auto b = s[k].data();
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = double(a[i]) - double(b[i]);
                sum += d * d;
            }
        }
        total += sum / double(t.front().shape().plane());
    }
    return total / double(teacher.levels.size());
}

} // namespace texturekit
