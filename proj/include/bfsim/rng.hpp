// SPDX-License-Identifier: Apache-2.0

#ifndef BFSIM_RNG_HPP
#define BFSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace bfsim {

/// Stateless splitmix64 mix of a single 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derive an independent child seed from (parent, index). Children for
/// distinct indices are decorrelated, so each trial and each substream
/// (symbols, noise, walk, ...) gets its own reproducible generator.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(parent + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Seeded generator with explicit distribution code on top of mt19937_64,
/// so draws are identical for a given seed on every platform (the std
/// distributions are implementation-defined and would break byte-stable
/// output files).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, 4): two top bits of the engine output.
    unsigned bits2() { return static_cast<unsigned>(engine_() >> 62); }

    /// Standard normal via Box-Muller; caches the second deviate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi_u2 = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(two_pi_u2);
        have_spare_ = true;
        return r * std::cos(two_pi_u2);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace bfsim

#endif // BFSIM_RNG_HPP
