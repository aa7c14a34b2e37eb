#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace texturekit {

/// Seeded generator with portable conversions; the standard distributions
/// are implementation-defined and would break cross-platform determinism.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// (0, 1]
    double uniform() { return double((engine_() >> 11) + 1) * 0x1p-53; }

    /// [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * (uniform() - 0x1p-53); }

    /// [0, n)
    std::size_t below(std::size_t n) {
        const std::uint64_t bound = std::uint64_t(n);
        const std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = top - top % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return std::size_t(x % bound);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace texturekit
