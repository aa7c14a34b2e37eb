#include <texturekit/tensor_io.hpp>

#include <texturekit/error.hpp>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace texturekit {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, std::size_t& offset)
        : bytes_(bytes), offset_(offset) {}

    void need(std::size_t n, const char* what) const {
        if (offset_ > bytes_.size() || bytes_.size() - offset_ < n) {
            throw Error(ErrorCode::Truncated, std::string("while reading ") + what);
        }
    }

    std::string_view take_view(std::size_t n, const char* what) {
        need(n, what);
        std::string_view v(reinterpret_cast<const char*>(bytes_.data() + offset_), n);
        offset_ += n;
        return v;
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes_[offset_ + i]) << (8 * i);
        offset_ += 4;
        return v;
    }

    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes_[offset_ + i]) << (8 * i);
        offset_ += 8;
        return v;
    }

    std::size_t remaining() const { return bytes_.size() - offset_; }
    std::size_t& offset() { return offset_; }
    const std::uint8_t* cursor() const { return bytes_.data() + offset_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t& offset_;
};

} // namespace

std::vector<std::uint8_t> encode_tensor(const FeatureMap& map) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 4 + 24 + 4 * map.size());
    out.insert(out.end(), kTensorMagic.begin(), kTensorMagic.end());
    put_u32(out, 3);
    put_u64(out, map.channels());
    put_u64(out, map.height());
    put_u64(out, map.width());
    for (float v : map.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

FeatureMap decode_tensor(std::span<const std::uint8_t> bytes, std::size_t& offset) {
    Reader in(bytes, offset);
    if (in.take_view(4, "tensor magic") != kTensorMagic) {
        throw Error(ErrorCode::BadMagic, "expected TXK1 tensor");
    }
    const std::uint32_t ndim = in.u32("ndim");
    if (ndim != 3) {
        throw Error(ErrorCode::UnsupportedFormat, "TXK1 ndim must be 3, got " + std::to_string(ndim));
    }
    std::uint64_t dims[3];
    for (auto& d : dims) d = in.u64("dims");

    // Every dimension must be positive and the float payload byte count must
    // fit in size_t without wrapping.
    constexpr std::uint64_t limit = std::numeric_limits<std::size_t>::max() / 4;
    std::uint64_t count = 1;
    for (auto d : dims) {
        if (d == 0) throw Error(ErrorCode::DimOverflow, "zero dimension in TXK1 header");
        if (count > limit / d) throw Error(ErrorCode::DimOverflow, "TXK1 element count overflows");
        count *= d;
    }
    if (in.remaining() / 4 < count) {
        throw Error(ErrorCode::Truncated, "TXK1 payload shorter than header dims");
    }

    std::vector<float> data(count);
    const std::uint8_t* p = in.cursor();
    for (std::size_t i = 0; i < count; ++i, p += 4) {
        std::uint32_t raw = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                            std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
        data[i] = std::bit_cast<float>(raw);
    }
    in.offset() += 4 * count;
    return FeatureMap(Shape{dims[0], dims[1], dims[2]}, std::move(data));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::UnreadableFile, path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    if (f.bad()) throw Error(ErrorCode::UnreadableFile, path.string());
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::WriteFailed, path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!f) throw Error(ErrorCode::WriteFailed, path.string());
}

void write_tensor(const FeatureMap& map, const std::filesystem::path& path) {
    write_file_bytes(path, encode_tensor(map));
}

FeatureMap read_tensor(const std::filesystem::path& path) {
    auto bytes = read_file_bytes(path);
    std::size_t offset = 0;
    return decode_tensor(bytes, offset);
}

// ---------------------------------------------------------------------------
// WeightSet

void WeightSet::add(std::string name, FeatureMap tensor) {
    if (contains(name)) throw Error(ErrorCode::DuplicateName, name);
    entries_.emplace_back(std::move(name), std::move(tensor));
}

bool WeightSet::contains(std::string_view name) const noexcept {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return e.first == name; });
}

const FeatureMap& WeightSet::get(std::string_view name) const {
    for (const auto& [key, tensor] : entries_) {
        if (key == name) return tensor;
    }
    throw Error(ErrorCode::MissingWeight, std::string(name));
}

const FeatureMap& WeightSet::matrix(std::string_view name, std::size_t rows,
                                    std::size_t cols) const {
    const FeatureMap& t = get(name);
    if (t.shape() != Shape{1, rows, cols}) {
        throw Error(ErrorCode::ShapeMismatch,
                    std::string(name) + " expected 1x" + std::to_string(rows) + "x" +
                        std::to_string(cols));
    }
    return t;
}

const FeatureMap& WeightSet::vector(std::string_view name, std::size_t length) const {
    return matrix(name, 1, length);
}

std::vector<std::uint8_t> encode_weights(const WeightSet& weights) {
    std::vector<std::uint8_t> out(kWeightsMagic.begin(), kWeightsMagic.end());
    put_u32(out, static_cast<std::uint32_t>(weights.size()));
    for (const auto& [name, tensor] : weights.entries()) {
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        out.insert(out.end(), name.begin(), name.end());
        auto t = encode_tensor(tensor);
        out.insert(out.end(), t.begin(), t.end());
    }
    return out;
}

WeightSet decode_weights(std::span<const std::uint8_t> bytes) {
    std::size_t offset = 0;
    Reader in(bytes, offset);
    if (in.take_view(4, "weights magic") != kWeightsMagic) {
        throw Error(ErrorCode::BadMagic, "expected TXKW weights");
    }
    const std::uint32_t count = in.u32("record count");
    WeightSet weights;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t len = in.u32("name length");
        std::string name(in.take_view(len, "name"));
        weights.add(std::move(name), decode_tensor(bytes, offset));
    }
    return weights;
}

WeightSet load_weights(const std::filesystem::path& path) {
    return decode_weights(read_file_bytes(path));
}

void save_weights(const WeightSet& weights, const std::filesystem::path& path) {
    write_file_bytes(path, encode_weights(weights));
}

} // namespace texturekit
