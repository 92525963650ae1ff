#pragma once

#include <cstdint>
#include <random>

namespace pettis {

/// Seeded generator whose output depends only on the seed, on every platform.
/// std::uniform_real_distribution is implementation-defined, so uniforms are
/// taken from the top 53 bits directly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi] (modulo bias below 2^-40 for small ranges).
    std::uint64_t below(std::uint64_t lo, std::uint64_t hi) {
        return lo + engine_() % (hi - lo + 1);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pettis
