#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vdtp {

// splitmix64: scrambles correlated seeds (e.g. master_seed ^ small index)
// into well-separated mt19937_64 seeds.
inline constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic random source. Distributions are implemented by hand
// (53-bit uniform, Box-Muller normal) because the standard library's
// <random> distributions may emit different sequences across toolchains,
// and traces must be bit-identical everywhere for a given seed.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(splitmix64(seed)) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller; two uniforms per draw, no caching, so
    // the stream position is a pure function of the number of calls.
    double gaussian() {
        // First uniform shifted into (0, 1] so the log is finite.
        double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace vdtp
