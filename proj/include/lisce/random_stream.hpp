// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include "lisce/errors.hpp"
#include "lisce/types.hpp"

namespace lisce {

// Counter-based random stream built on Philox4x32-10.
//
//   Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.
//
// The generator is a pure function of (key, counter): the 64-bit master seed
// forms the key, the 64-bit stream id occupies the high counter words and the
// draw index the low ones.  Draw k of stream s under seed m is therefore the
// same value no matter how many other streams exist or in which order they
// are consumed, which is what makes trial-level parallelism bit-exact.
class RandomStream {
   public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
        : key0_(static_cast<std::uint32_t>(master_seed)),
          key1_(static_cast<std::uint32_t>(master_seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream_id)),
          stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)),
          draw_(0) {}

    /// Next 64-bit word; draw index advances by one.
    std::uint64_t next_u64() noexcept {
        std::uint32_t c0 = static_cast<std::uint32_t>(draw_);
        std::uint32_t c1 = static_cast<std::uint32_t>(draw_ >> 32);
        ++draw_;
        std::uint32_t x0 = c0, x1 = c1, x2 = stream_lo_, x3 = stream_hi_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k0 += 0x9E3779B9u;
                k1 += 0xBB67AE85u;
            }
            std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * x0;
            std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * x2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            std::uint32_t y0 = hi1 ^ x1 ^ k0;
            std::uint32_t y1 = lo1;
            std::uint32_t y2 = hi0 ^ x3 ^ k1;
            std::uint32_t y3 = lo0;
            x0 = y0;
            x1 = y1;
            x2 = y2;
            x3 = y3;
        }
        return (static_cast<std::uint64_t>(x1) << 32) | x0;
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// One Box-Muller pair of independent standard normals.
    std::pair<double, double> normal_pair() noexcept {
        // u1 in (0, 1] keeps the log finite.
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    std::uint64_t draw_index() const noexcept { return draw_; }

   private:
    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t draw_;
};

/// Circularly symmetric complex Gaussian CN(mean, variance); `variance` is the
/// total variance E|w|^2, split evenly between the real and imaginary parts.
/// Zero variance returns the mean exactly and consumes no draws.
inline cplx sample_complex_gaussian(cplx mean, double variance, RandomStream& rng) {
    if (variance < 0.0) {
        throw invalid_parameter_error("sample_complex_gaussian: negative variance");
    }
    if (variance == 0.0) {
        return mean;
    }
    auto [z0, z1] = rng.normal_pair();
    double scale = std::sqrt(variance / 2.0);
    return mean + cplx(scale * z0, scale * z1);
}

}  // namespace lisce
