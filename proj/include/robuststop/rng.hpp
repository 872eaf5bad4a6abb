// Counter-based random streams (Philox4x32-10).
//
// Every draw is addressed by (seed, stream, path, step, channel), so paths
// can be generated in any order or in parallel and re-simulation with the
// same seed is bit-identical regardless of the worker count.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace robuststop {

namespace detail {

inline void philox_round(std::uint32_t& c0, std::uint32_t& c1, std::uint32_t& c2,
                         std::uint32_t& c3, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
}

inline std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t ctr_hi,
                                               std::uint64_t ctr_lo) {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int r = 0; r < 10; ++r) {
        philox_round(c0, c1, c2, c3, k0, k1);
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return {c0, c1, c2, c3};
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

// Derives disjoint seeds for the consecutive simulation stages of a run.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return detail::splitmix64(base ^ detail::splitmix64(tag));
}

// One logical random stream; draws are pure functions of (path, step, channel).
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::splitmix64(seed) ^ detail::splitmix64(stream * 0x9E3779B97F4A7C15ull + 1)) {}

    // Two independent U(0,1) variates, each strictly inside (0,1).
    std::array<double, 2> uniform_pair(std::uint64_t path, std::uint64_t step,
                                       std::uint32_t channel) const {
        const auto w = detail::philox4x32(key_, path, (step << 16) | channel);
        const double inv = 1.0 / 4294967296.0;  // 2^-32
        const double u0 = (static_cast<double>(w[0]) + 0.5) * inv;
        const double u1 = (static_cast<double>(w[1]) + 0.5) * inv;
        return {u0, u1};
    }

    // Standard normal via Box-Muller on the counter block.
    double normal(std::uint64_t path, std::uint64_t step, std::uint32_t channel) const {
        const auto u = uniform_pair(path, step, channel);
        return std::sqrt(-2.0 * std::log(u[0])) * std::cos(6.283185307179586477 * u[1]);
    }

    // Poisson count by CDF inversion of a single uniform; exact for the
    // small per-step means used on fine grids.
    int poisson(std::uint64_t path, std::uint64_t step, std::uint32_t channel,
                double mean) const {
        if (mean <= 0.0) return 0;
        const double u = uniform_pair(path, step, channel)[0];
        double p = std::exp(-mean);
        double cdf = p;
        int k = 0;
        const int cap = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 25.0);
        while (u > cdf && k < cap) {
            ++k;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }

  private:
    std::uint64_t key_;
};

}  // namespace robuststop
