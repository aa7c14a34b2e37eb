/**
 * @file error.hpp
 * @brief Error type shared by every texturekit module
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace texturekit {

enum class ErrorCode {
    InvalidArgument,
    ShapeMismatch,
    UnreadableFile,
    UnsupportedFormat,
    UnsupportedBitDepth,
    WriteFailed,
    BadMagic,
    Truncated,
    DimOverflow,
    DuplicateName,
    MissingWeight,
    DegenerateRegion,
    DegenerateQuantization,
    SingularCovariance,
    NotNormalized,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// True for errors caused by the filesystem or file contents.
    bool is_io() const noexcept;

private:
    ErrorCode code_;
};

} // namespace texturekit
