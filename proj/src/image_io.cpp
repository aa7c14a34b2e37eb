#include <texturekit/image_io.hpp>

#include <texturekit/error.hpp>
#include <texturekit/tensor_io.hpp>

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

namespace texturekit {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint8_t to_byte(float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

// Interleaved bytes (pixel-major) to a channel-planar map.
FeatureMap from_interleaved(const std::uint8_t* px, std::size_t channels, std::size_t height,
                            std::size_t width) {
    FeatureMap map(Shape{channels, height, width});
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            for (std::size_t c = 0; c < channels; ++c) {
                map.at(c, y, x) = float(px[(y * width + x) * channels + c]) / 255.0f;
            }
        }
    }
    return map;
}

std::vector<std::uint8_t> to_interleaved(const FeatureMap& map) {
    std::vector<std::uint8_t> px(map.size());
    const std::size_t ch = map.channels();
    for (std::size_t y = 0; y < map.height(); ++y) {
        for (std::size_t x = 0; x < map.width(); ++x) {
            for (std::size_t c = 0; c < ch; ++c) {
                px[(y * map.width() + x) * ch + c] = to_byte(map.at(c, y, x));
            }
        }
    }
    return px;
}

// ---------------------------------------------------------------------------
// PGM

FeatureMap decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    std::size_t pos = 2;
    auto next_token = [&]() -> std::string {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        std::string tok;
        while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
            tok.push_back(static_cast<char>(bytes[pos++]));
        }
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) {
            throw Error(ErrorCode::UnreadableFile, name + ": malformed PGM header");
        }
        return tok;
    };

    const std::size_t width = std::stoull(next_token());
    const std::size_t height = std::stoull(next_token());
    const std::size_t maxval = std::stoull(next_token());
    ++pos;  // single whitespace byte before the raster

    if (width == 0 || height == 0) {
        throw Error(ErrorCode::UnreadableFile, name + ": empty PGM raster");
    }
    if (maxval > 255) {
        throw Error(ErrorCode::UnsupportedBitDepth, name + ": PGM maxval " + std::to_string(maxval));
    }
    if (maxval != 255) {
        throw Error(ErrorCode::UnsupportedFormat,
                    name + ": PGM maxval must be 255, got " + std::to_string(maxval));
    }
    if (pos > bytes.size() || bytes.size() - pos < width * height) {
        throw Error(ErrorCode::UnreadableFile, name + ": PGM raster truncated");
    }
    return from_interleaved(bytes.data() + pos, 1, height, width);
}

// ---------------------------------------------------------------------------
// PNG

struct PngReadDeleter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadDeleter() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct MemorySource {
    const std::vector<std::uint8_t>* bytes;
    std::size_t pos;
};

void png_read_memory(png_structp png, png_bytep out, png_size_t n) {
    auto* src = static_cast<MemorySource*>(png_get_io_ptr(png));
    if (src->bytes->size() - src->pos < n) png_error(png, "unexpected end of PNG data");
    std::copy_n(src->bytes->data() + src->pos, n, out);
    src->pos += n;
}

FeatureMap decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    PngReadDeleter guard;
    guard.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!guard.png) throw Error(ErrorCode::UnreadableFile, name + ": libpng init failed");
    guard.info = png_create_info_struct(guard.png);
    if (!guard.info) throw Error(ErrorCode::UnreadableFile, name + ": libpng init failed");

    // libpng reports corrupt data via longjmp. Locals touched after setjmp
    // live behind the heap pointer so their values survive the jump.
    struct Buffers {
        std::vector<std::uint8_t> pixels;
        std::vector<png_bytep> rows;
        png_uint_32 width = 0, height = 0;
        int bit_depth = 0, color_type = 0;
    };
    MemorySource src{&bytes, 0};
    const auto buf = std::make_unique<Buffers>();
    auto& [pixels, rows, width, height, bit_depth, color_type] = *buf;

    if (setjmp(png_jmpbuf(guard.png))) {
        throw Error(ErrorCode::UnreadableFile, name + ": corrupt PNG");
    }
    png_set_read_fn(guard.png, &src, png_read_memory);
    png_read_info(guard.png, guard.info);
    png_get_IHDR(guard.png, guard.info, &width, &height, &bit_depth, &color_type, nullptr,
                 nullptr, nullptr);

    if (bit_depth != 8) {
        throw Error(ErrorCode::UnsupportedBitDepth,
                    name + ": PNG bit depth " + std::to_string(bit_depth));
    }
    std::size_t channels = 0;
    if (color_type == PNG_COLOR_TYPE_GRAY) channels = 1;
    else if (color_type == PNG_COLOR_TYPE_RGB) channels = 3;
    else throw Error(ErrorCode::UnsupportedFormat, name + ": PNG must be 8-bit gray or RGB");

    pixels.resize(std::size_t(width) * height * channels);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * width * channels;
    png_read_image(guard.png, rows.data());
    png_read_end(guard.png, nullptr);

    return from_interleaved(pixels.data(), channels, height, width);
}

} // namespace

FeatureMap load_image(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    const std::string name = path.string();
    if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature),
                                        bytes.begin())) {
        return decode_png(bytes, name);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
        return decode_pgm(bytes, name);
    }
    throw Error(ErrorCode::UnsupportedFormat, name + ": not a P5 PGM or PNG file");
}

void save_pnm(const FeatureMap& map, const std::filesystem::path& path) {
    if (map.channels() != 1 && map.channels() != 3) {
        throw Error(ErrorCode::InvalidArgument, "PNM output needs 1 or 3 channels");
    }
    const std::string header = std::string(map.channels() == 1 ? "P5" : "P6") + "\n" +
                               std::to_string(map.width()) + " " +
                               std::to_string(map.height()) + "\n255\n";
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    const auto px = to_interleaved(map);
    bytes.insert(bytes.end(), px.begin(), px.end());
    write_file_bytes(path, bytes);
}

void save_png(const FeatureMap& map, const std::filesystem::path& path) {
    if (map.channels() != 1 && map.channels() != 3) {
        throw Error(ErrorCode::InvalidArgument, "PNG output needs 1 or 3 channels");
    }
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(map.width());
    image.height = static_cast<png_uint_32>(map.height());
    image.format = map.channels() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    const auto px = to_interleaved(map);
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, px.data(), 0, nullptr)) {
        throw Error(ErrorCode::WriteFailed, path.string() + ": " + image.message);
    }
}

} // namespace texturekit
