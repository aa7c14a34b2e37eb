/**
 * @file tensor_io.hpp
 * @brief TXK1 tensor files and TXKW weight bundles
 *
 * TXK1 layout (all integers little-endian):
 *   "TXK1" | u32 ndim (= 3) | u64 C | u64 H | u64 W | C*H*W f32 values
 *
 * TXKW layout:
 *   "TXKW" | u32 count | count x ( u32 name_len | name bytes (UTF-8) | TXK1 tensor )
 */

#pragma once

#include <texturekit/feature_map.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace texturekit {

inline constexpr std::string_view kTensorMagic = "TXK1";
inline constexpr std::string_view kWeightsMagic = "TXKW";

/// Serialized TXK1 bytes for `map`.
std::vector<std::uint8_t> encode_tensor(const FeatureMap& map);

/// Parses one TXK1 tensor starting at `offset` and advances it past the payload.
FeatureMap decode_tensor(std::span<const std::uint8_t> bytes, std::size_t& offset);

void write_tensor(const FeatureMap& map, const std::filesystem::path& path);
FeatureMap read_tensor(const std::filesystem::path& path);

/// Named parameter tensors, kept in insertion (file) order.
///
/// Matrices are stored as 1 x rows x cols maps and vectors as 1 x 1 x n.
class WeightSet {
public:
    std::string version{kWeightsMagic};

    /// Throws DuplicateName when `name` is already present.
    void add(std::string name, FeatureMap tensor);

    bool contains(std::string_view name) const noexcept;
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Throws MissingWeight.
    const FeatureMap& get(std::string_view name) const;

    /// get() plus a shape check against rows x cols (ShapeMismatch otherwise).
    const FeatureMap& matrix(std::string_view name, std::size_t rows, std::size_t cols) const;
    const FeatureMap& vector(std::string_view name, std::size_t length) const;

    const std::vector<std::pair<std::string, FeatureMap>>& entries() const noexcept {
        return entries_;
    }

private:
    std::vector<std::pair<std::string, FeatureMap>> entries_;
};

std::vector<std::uint8_t> encode_weights(const WeightSet& weights);
WeightSet decode_weights(std::span<const std::uint8_t> bytes);

WeightSet load_weights(const std::filesystem::path& path);
void save_weights(const WeightSet& weights, const std::filesystem::path& path);

/// Whole-file helpers shared by the readers above and the CLI.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace texturekit
