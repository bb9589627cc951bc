/*
 * rng.hpp — deterministic seeded randomness for simulations and searches.
 *
 * Every stochastic component in the library draws from SplitMix64 streams
 * derived from (seed, stream index). Trial i of a run always sees the same
 * stream regardless of sharding or evaluation order.
 */
#pragma once

#include <cmath>
#include <cstdint>

namespace jamlab {

// Stafford's mix13 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

// Combine a seed with a stream/trial index into an independent stream seed.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    constexpr std::uint64_t operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return ~0ULL; }

    // Uniform double in [0, 1).
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    // Fair coin as ±1.
    int sign() noexcept { return ((*this)() >> 63) ? +1 : -1; }

    // Standard normal via Box-Muller (implementation-independent).
    double normal() noexcept {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
    }

    std::uint64_t below(std::uint64_t n) noexcept { return (*this)() % n; }

  private:
    std::uint64_t state_;
};

} // namespace jamlab
