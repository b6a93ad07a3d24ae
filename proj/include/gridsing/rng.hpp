#pragma once

// Counter-based Philox4x32-10 generator. Random numbers are a pure function of
// (seed, stream, sample, component), so any partition of the sample range over
// threads reproduces the same values.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace gridsing {

inline constexpr std::uint64_t kDefaultSeed = 0xA11CE;

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    constexpr std::uint64_t kM0 = 0xD2511F53u;
    constexpr std::uint64_t kM1 = 0xCD9E8D57u;
    const std::uint64_t p0 = kM0 * ctr[0];
    const std::uint64_t p1 = kM1 * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
}

}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        detail::philox_round(ctr, key);
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

/// Independent stream of uniforms addressed by (sample, component).
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint32_t stream() const { return stream_; }

    /// 64 random bits for the given sample and component.
    std::uint64_t bits(std::uint64_t sample, std::uint32_t component) const {
        const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(sample),
                                               static_cast<std::uint32_t>(sample >> 32), component >> 1, stream_};
        const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                               static_cast<std::uint32_t>(seed_ >> 32)};
        const auto out = philox4x32(ctr, key);
        const std::size_t base = (component & 1u) * 2;
        return (static_cast<std::uint64_t>(out[base]) << 32) | out[base + 1];
    }

    /// Uniform in the open interval (0, 1).
    double uniform(std::uint64_t sample, std::uint32_t component) const {
        return (static_cast<double>(bits(sample, component) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on components (2c, 2c+1).
    double normal(std::uint64_t sample, std::uint32_t component) const {
        const double u1 = uniform(sample, 2 * component);
        const double u2 = uniform(sample, 2 * component + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::uint64_t seed_;
    std::uint32_t stream_;
};

}  // namespace gridsing
