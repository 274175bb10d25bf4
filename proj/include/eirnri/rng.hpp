#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace eirnri {

/// Seedable generator with portable output. std::mt19937_64 emits the
/// same stream on every conforming implementation; the uniform/normal
/// transforms below are fixed arithmetic, so matrices, masks and solver
/// traces reproduce bit-for-bit across platforms (the distributions in
/// <random> make no such guarantee).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; consumes exactly two draws.
    double normal() {
        const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;        // [0, 1)
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Uniform integer in [0, n) by rejection (unbiased).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace eirnri
