/**
 * @file feature_map.hpp
 * @brief Dense C x H x W float tensor used for images, features and subbands
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace texturekit {

struct Shape {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t plane() const noexcept { return height * width; }
    std::size_t size() const noexcept { return channels * height * width; }
    bool operator==(const Shape&) const = default;
};

/**
 * Row-major channel-planar tensor. Element (c, y, x) lives at
 * (c * height + y) * width + x.
 *
 * Every dimension is positive. Values are required to be finite at the
 * public boundaries (construction from external buffers, file readers);
 * internal producers uphold it.
 */
class FeatureMap {
public:
    FeatureMap() = default;

    /// Zero-filled map. Throws InvalidArgument on an empty dimension.
    explicit FeatureMap(Shape shape);

    /// Takes ownership of `data`. Throws ShapeMismatch when the length
    /// differs from shape.size() and InvalidArgument on non-finite values.
    FeatureMap(Shape shape, std::vector<float> data);

    static FeatureMap filled(Shape shape, float value);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t channels() const noexcept { return shape_.channels; }
    std::size_t height() const noexcept { return shape_.height; }
    std::size_t width() const noexcept { return shape_.width; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const float> data() const noexcept { return data_; }
    std::span<float> data() noexcept { return data_; }

    std::span<const float> channel(std::size_t c) const noexcept {
        return std::span<const float>(data_).subspan(c * shape_.plane(), shape_.plane());
    }
    std::span<float> channel(std::size_t c) noexcept {
        return std::span<float>(data_).subspan(c * shape_.plane(), shape_.plane());
    }

    float at(std::size_t c, std::size_t y, std::size_t x) const noexcept {
        return data_[(c * shape_.height + y) * shape_.width + x];
    }
    float& at(std::size_t c, std::size_t y, std::size_t x) noexcept {
        return data_[(c * shape_.height + y) * shape_.width + x];
    }

    bool all_finite() const noexcept;

    bool operator==(const FeatureMap&) const = default;

private:
    Shape shape_{};
    std::vector<float> data_;
};

/// Largest absolute element-wise difference; throws ShapeMismatch.
double max_abs_diff(const FeatureMap& a, const FeatureMap& b);

/// Element-wise a + b; throws ShapeMismatch.
FeatureMap add(const FeatureMap& a, const FeatureMap& b);

/// Element-wise alpha * a.
FeatureMap scale(const FeatureMap& a, float alpha);

/// Copies the rectangle [top, top+height) x [left, left+width) of every channel.
FeatureMap crop(const FeatureMap& a, std::size_t top, std::size_t left,
                std::size_t height, std::size_t width);

/// Bilinear resampling to (height, width) with half-pixel centers. Used to
/// bring student features to teacher resolution before comparing them.
FeatureMap resize_bilinear(const FeatureMap& a, std::size_t height, std::size_t width);

} // namespace texturekit
