#pragma once

#include <cstdint>

namespace far {

/// SplitMix64 (Steele, Lea, Flood 2014). Used only to expand a 64-bit seed
/// into the xoshiro state.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman, Vigna). The state words are the first four
/// SplitMix64 outputs of the seed. This is the only generator in the library,
/// so every seeded output is bit-reproducible across platforms:
///
///   uniform01()   = (next() >> 11) * 2^-53            in [0, 1)
///   uniform(a, b) = a + (b - a) * uniform01()
///   below(n)      = rejection sampling on next() % n   (exactly uniform)
///   normal()      = Box-Muller on u1 = 1 - uniform01(), u2 = uniform01(),
///                   returning sqrt(-2 ln u1) * cos(2 pi u2); one draw pair
///                   per call, the sine branch is discarded.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto &s : s_)
            s = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t below(std::uint64_t n);

    double normal();

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

} // namespace far
