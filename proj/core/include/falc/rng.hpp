#pragma once

#include <cstdint>
#include <optional>

namespace falc {

/// SplitMix64 stream with uniform and Box-Muller Gaussian draws. The constants
/// fix the sequence, so instances replay bit-for-bit from a seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on [0, bound), 0 < bound < 2^53.
    std::uint64_t below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(bound));
    }

    double gaussian() noexcept;

private:
    std::uint64_t state_;
    std::optional<double> spare_;
};

}  // namespace falc
