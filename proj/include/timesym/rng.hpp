#pragma once

/**
 * @file
 * Reproducible random streams.
 *
 * Every sampled quantity draws from a std::mt19937_64 engine. Ensembles do
 * not share one engine: sample i of a run with master seed s uses its own
 * engine seeded with derive_seed(s, i), where
 *
 *     derive_seed(s, i) = splitmix64(splitmix64(s) ^ (i * 0x9E3779B97F4A7C15))
 *
 * and splitmix64 is the SplitMix64 finalizer (Steele, Lea, Flood 2014).
 * Streams are therefore independent of evaluation order and can be split
 * across threads. Uniform doubles use the top 53 bits of one engine output,
 * which is platform independent (unlike std::uniform_real_distribution).
 */

#include <cstdint>
#include <random>

namespace timesym {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ (index * 0x9E3779B97F4A7C15ULL));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

} // namespace timesym
