#include <texturekit/error.hpp>

namespace texturekit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::ShapeMismatch: return "shape mismatch";
        case ErrorCode::UnreadableFile: return "unreadable file";
        case ErrorCode::UnsupportedFormat: return "unsupported format";
        case ErrorCode::UnsupportedBitDepth: return "unsupported bit depth";
        case ErrorCode::WriteFailed: return "write failed";
        case ErrorCode::BadMagic: return "bad magic";
        case ErrorCode::Truncated: return "truncated payload";
        case ErrorCode::DimOverflow: return "dimension overflow";
        case ErrorCode::DuplicateName: return "duplicate name";
        case ErrorCode::MissingWeight: return "missing weight";
        case ErrorCode::DegenerateRegion: return "degenerate region";
        case ErrorCode::DegenerateQuantization: return "degenerate quantization";
        case ErrorCode::SingularCovariance: return "singular covariance";
        case ErrorCode::NotNormalized: return "not normalized";
    }
    return "unknown error";
}

bool Error::is_io() const noexcept {
    switch (code_) {
        case ErrorCode::UnreadableFile:
        case ErrorCode::UnsupportedFormat:
        case ErrorCode::UnsupportedBitDepth:
        case ErrorCode::WriteFailed:
        case ErrorCode::BadMagic:
        case ErrorCode::Truncated:
        case ErrorCode::DimOverflow:
        case ErrorCode::DuplicateName:
            return true;
        default:
            return false;
    }
}

} // namespace texturekit
