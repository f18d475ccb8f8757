#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace opstable {

/// splitmix64 finalizer; the basis of the published substream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Child seed for path k of a batch: hash64(seed, k). Documented so that
/// batches are reproducible across machines and thread counts.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t k) {
    return splitmix64(splitmix64(seed) ^ splitmix64(k + 0x9E3779B97F4A7C15ULL));
}

/// Seeded generator with explicit variate transforms (no std::*_distribution,
/// whose output sequences are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Unit-rate exponential.
    double exponential() { return -std::log1p(-uniform01()); }

    /// Standard normal via Box-Muller (two uniforms per call, no cache).
    double normal() {
        const double u1 = 1.0 - uniform01(); // in (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Independent child generator (consumes one draw).
    Rng split() { return Rng(next_u64()); }

private:
    std::mt19937_64 engine_;
};

} // namespace opstable
