#pragma once

// Counter-based deterministic random numbers.
//
// Every random quantity in the library is a pure function of (key, counter),
// so streams are reproducible bit-for-bit on any platform, independent of
// evaluation order, and safe to sample in parallel. std::random distributions
// are deliberately avoided: their output is implementation-defined.

#include <cmath>
#include <cstdint>
#include <utility>

namespace optagg {

namespace detail {

// SplitMix64 finalizer (Steele et al.). Full 64-bit avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// One keyed stream; element k is independent of all other elements.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t bits(std::uint64_t k) const {
        return detail::mix64(key_ ^ detail::mix64(k + 1));
    }

    // Uniform in [0, 1); 53-bit resolution.
    double uniform(std::uint64_t k) const {
        return static_cast<double>(bits(k) >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n) for n a power of two (exact, no modulo bias).
    std::uint32_t uniform_pow2(std::uint64_t k, unsigned bit_count) const {
        return static_cast<std::uint32_t>(bits(k) >> (64 - bit_count));
    }

    // Standard normal pair via Box-Muller from counters (2k, 2k+1).
    std::pair<double, double> gaussian_pair(std::uint64_t k) const {
        // +1 in the mantissa keeps u1 strictly positive for the log.
        const double u1 = (static_cast<double>(bits(2 * k) >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform(2 * k + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_;
};

// Documented seed-splitting rule: stage n of a scenario with seed s draws from
// key mix64(s ^ mix64(n)). Stage ids are stable, see scenario.hpp.
inline std::uint64_t stage_seed(std::uint64_t scenario_seed, std::uint64_t stage_id) {
    return detail::mix64(scenario_seed ^ detail::mix64(stage_id));
}

}  // namespace optagg
