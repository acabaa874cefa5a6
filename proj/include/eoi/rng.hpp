#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace eoi {

/// Seedable pseudo-random generator with a fixed, documented algorithm so
/// that streams reproduce bit-exactly across platforms and compilers.
///
/// Engine: xoshiro256++ (Blackman & Vigna), state expanded from the 64-bit
/// seed with splitmix64. Doubles in [0,1) take the top 53 bits of one
/// engine output. Normals use the Marsaglia polar method, which needs only
/// sqrt/log and caches its second deviate.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
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

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform angle on [0, 2*pi).
    double uniform_angle() {
        return uniform01() * 6.283185307179586476925286766559;
    }

    /// Unbiased uniform integer in [0, bound) via rejection.
    std::uint64_t uniform_index(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::uniform_index: bound must be positive");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Unordered index pair 0 <= first < second < n, uniform over all
    /// n*(n-1)/2 pairs (two distinct draws, then sorted).
    std::pair<std::uint32_t, std::uint32_t> uniform_pair(std::uint32_t n) {
        if (n < 2) throw std::invalid_argument("Rng::uniform_pair: n must be >= 2");
        for (;;) {
            const auto a = static_cast<std::uint32_t>(uniform_index(n));
            const auto b = static_cast<std::uint32_t>(uniform_index(n));
            if (a == b) continue;
            return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        }
    }

    /// Standard normal deviate, Marsaglia polar method.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * scale;
        has_cached_ = true;
        return u * scale;
    }

    /// Independent child stream for parallel cells: the pair is folded
    /// through splitmix64 so neighbouring indices decorrelate.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xbf58476d1ce4e5b9ULL);
        splitmix64(x);
        return splitmix64(x);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace eoi
