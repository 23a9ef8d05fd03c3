#ifndef PLUME_RNG_HPP
#define PLUME_RNG_HPP

#include <cmath>
#include <cstdint>

namespace plume {

/// SplitMix64 finalizer. Bijective on 64-bit words; used both to advance
/// the sequential generator and to hash (seed, index) keys so that every
/// random draw is a pure function of its key.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derive a child seed from a parent seed and up to two stream indices.
/// Each level is one SplitMix64 step, so (seed, a) and (seed, a, b)
/// occupy disjoint streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
    return mix64(seed + 0x9e3779b97f4a7c15ull * (a + 1));
}
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

/// Minimal sequential generator (SplitMix64).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

/// Standard normal deviate addressed by (seed, a, b). Box-Muller on two
/// hashed uniforms; a pure function of its key, so the value is identical
/// no matter which thread or in which order it is computed.
inline double gaussian_at(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    const std::uint64_t k = derive_seed(seed, a, b);
    const std::uint64_t h1 = mix64(k + 0x9e3779b97f4a7c15ull);
    const std::uint64_t h2 = mix64(k + 2 * 0x9e3779b97f4a7c15ull);
    // u1 in (0, 1] keeps the log finite; u2 in [0, 1).
    const double u1 = static_cast<double>((h1 >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace plume

#endif
