/**
 * @file cli.hpp
 * @brief Command-line front end, kept in the library so tests can drive it in-process
 *
 * Exit codes:
 *   0  success
 *   1  usage error or invalid input
 *   2  I/O error (unreadable input, unwritable output, malformed files)
 *   3  an invariant check or the selftest failed
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace texturekit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitInvariant = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace texturekit::cli
