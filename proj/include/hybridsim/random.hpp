#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace hybridsim {

/// Seeded generator whose derived draws do not depend on the standard
/// library's distribution implementations, so a seed reproduces the same
/// numbers on every toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n) {
        // Rejection sampling removes modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = engine_(); } while (x >= limit);
        return x % n;
    }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace hybridsim
