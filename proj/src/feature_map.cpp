#include <texturekit/feature_map.hpp>

#include <texturekit/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace texturekit {

namespace {

std::string shape_str(const Shape& s) {
    return std::to_string(s.channels) + "x" + std::to_string(s.height) + "x" +
           std::to_string(s.width);
}

void require_nonempty(const Shape& s) {
    if (s.channels == 0 || s.height == 0 || s.width == 0) {
        throw Error(ErrorCode::InvalidArgument, "empty feature map shape " + shape_str(s));
    }
}

void require_same(const Shape& a, const Shape& b, const char* op) {
    if (a != b) {
        throw Error(ErrorCode::ShapeMismatch,
                    std::string(op) + ": " + shape_str(a) + " vs " + shape_str(b));
    }
}

} // namespace

FeatureMap::FeatureMap(Shape shape) : shape_(shape) {
    require_nonempty(shape_);
    data_.assign(shape_.size(), 0.0f);
}

FeatureMap::FeatureMap(Shape shape, std::vector<float> data)
    : shape_(shape), data_(std::move(data)) {
    require_nonempty(shape_);
    if (data_.size() != shape_.size()) {
        throw Error(ErrorCode::ShapeMismatch,
                    "buffer of " + std::to_string(data_.size()) + " values for shape " +
                        shape_str(shape_));
    }
    if (!all_finite()) {
        throw Error(ErrorCode::InvalidArgument, "feature map contains NaN or Inf");
    }
}

FeatureMap FeatureMap::filled(Shape shape, float value) {
    return FeatureMap(shape, std::vector<float>(shape.size(), value));
}

bool FeatureMap::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

double max_abs_diff(const FeatureMap& a, const FeatureMap& b) {
    require_same(a.shape(), b.shape(), "max_abs_diff");
    double worst = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        worst = std::max(worst, std::abs(double(da[i]) - double(db[i])));
    }
    return worst;
}

FeatureMap add(const FeatureMap& a, const FeatureMap& b) {
    require_same(a.shape(), b.shape(), "add");
    FeatureMap out = a;
    auto dst = out.data();
    auto src = b.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    return out;
}

FeatureMap scale(const FeatureMap& a, float alpha) {
    FeatureMap out = a;
    for (float& v : out.data()) v *= alpha;
    return out;
}

FeatureMap crop(const FeatureMap& a, std::size_t top, std::size_t left, std::size_t height,
                std::size_t width) {
    if (height == 0 || width == 0 || top + height > a.height() || left + width > a.width()) {
        throw Error(ErrorCode::InvalidArgument, "crop rectangle outside " + shape_str(a.shape()));
    }
    FeatureMap out(Shape{a.channels(), height, width});
    for (std::size_t c = 0; c < a.channels(); ++c) {
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                out.at(c, y, x) = a.at(c, top + y, left + x);
            }
        }
    }
    return out;
}

FeatureMap resize_bilinear(const FeatureMap& a, std::size_t height, std::size_t width) {
    if (height == a.height() && width == a.width()) return a;
    FeatureMap out(Shape{a.channels(), height, width});

    auto source_coord = [](std::size_t dst, std::size_t dst_len, std::size_t src_len,
                           std::size_t& i0, std::size_t& i1, double& t) {
        double s = (double(dst) + 0.5) * double(src_len) / double(dst_len) - 0.5;
        s = std::clamp(s, 0.0, double(src_len - 1));
        i0 = static_cast<std::size_t>(std::floor(s));
        i1 = std::min(i0 + 1, src_len - 1);
        t = s - double(i0);
    };

    for (std::size_t y = 0; y < height; ++y) {
        std::size_t y0, y1;
        double ty;
        source_coord(y, height, a.height(), y0, y1, ty);
        for (std::size_t x = 0; x < width; ++x) {
            std::size_t x0, x1;
            double tx;
            source_coord(x, width, a.width(), x0, x1, tx);
            for (std::size_t c = 0; c < a.channels(); ++c) {
                double top = (1 - tx) * a.at(c, y0, x0) + tx * a.at(c, y0, x1);
                double bottom = (1 - tx) * a.at(c, y1, x0) + tx * a.at(c, y1, x1);
                out.at(c, y, x) = static_cast<float>((1 - ty) * top + ty * bottom);
            }
        }
    }
    return out;
}

} // namespace texturekit
