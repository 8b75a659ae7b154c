// Seedable, portable random number generation: xoshiro256++ with
// splitmix64 seeding. The integer stream is identical across platforms
// for a given seed; floating-point draws use only IEEE arithmetic plus
// libm log/cos for normals.
#pragma once

#include <cmath>
#include <cstdint>

namespace sparsedecomp {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent sub-seed from a base seed and up to three
// stream tags. Used to give every (matrix, signal) pair its own stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag0,
                                 std::uint64_t tag1 = 0, std::uint64_t tag2 = 0) {
    std::uint64_t s = base;
    s = splitmix64(s) ^ (0x6a09e667f3bcc909ULL + tag0);
    s = splitmix64(s) ^ (0xbb67ae8584caa73bULL + tag1);
    s = splitmix64(s) ^ (0x3c6ef372fe94f82bULL + tag2);
    return splitmix64(s);
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; caches the second deviate.
    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    // Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace sparsedecomp
