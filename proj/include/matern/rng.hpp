#ifndef MATERN_RNG_HPP
#define MATERN_RNG_HPP

#include <cstdint>

namespace matern {

// Portable, seedable generators so every sampled result is bit-reproducible
// across platforms and standard libraries. splitmix64 feeds xoshiro256++;
// both are the public-domain reference algorithms.

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0,1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in [-1,1).
    double uniform_pm1() { return 2.0 * uniform() - 1.0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Generator for one work block. Sampling is split into fixed-size blocks,
// each seeded independently from (seed, block); results are then reduced in
// block order, so totals do not depend on how blocks were scheduled across
// threads.
inline Xoshiro256pp block_rng(std::uint64_t seed, std::uint64_t block) {
    return Xoshiro256pp(splitmix64_mix(seed ^ splitmix64_mix(block + 1)));
}

}  // namespace matern

#endif  // MATERN_RNG_HPP
