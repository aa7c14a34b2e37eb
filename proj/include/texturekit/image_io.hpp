/**
 * @file image_io.hpp
 * @brief 8-bit PGM (P5) and PNG ingestion into FeatureMap
 */

#pragma once

#include <texturekit/feature_map.hpp>

#include <filesystem>

namespace texturekit {

/// Loads an 8-bit grayscale or RGB image as a 1- or 3-channel map with
/// values byte / 255. The format is detected from the file signature.
///
/// Errors: UnreadableFile (missing or corrupt), UnsupportedBitDepth (16-bit or
/// sub-byte samples), UnsupportedFormat (anything else).
FeatureMap load_image(const std::filesystem::path& path);

/// Writes a 1- or 3-channel map as an 8-bit PGM (P5) or PPM (P6), values
/// clamped to [0,1] and rounded to the nearest byte.
void save_pnm(const FeatureMap& map, const std::filesystem::path& path);

/// Writes a 1- or 3-channel map as an 8-bit PNG with the same quantization.
void save_png(const FeatureMap& map, const std::filesystem::path& path);

} // namespace texturekit
