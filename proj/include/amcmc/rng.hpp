#pragma once

#include <array>
#include <cstdint>

namespace amcmc {

// xoshiro256++ with SplitMix64 seeding (Blackman & Vigna). Chosen over the
// std:: engines because uniform and Gaussian draw sequences must be owned by
// this library: replays have to be bit-exact for a recorded seed, and replica
// streams must be constructible without touching each other.
//
// Stream splitting contract: replicate chains either use distinct user-given
// seeds (the CLI records each one), or streams derived by jump(), which
// advances 2^128 steps and therefore yields non-overlapping subsequences.
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

    // Uniform on [0,1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log() argument.
    double next_open_double() { return 1.0 - next_double(); }

    // Standard normal via Box-Muller; the paired deviate is cached.
    double next_gaussian();

    // Advance 2^128 steps; use to carve independent substreams by hand.
    void jump();

    // Substream k: copy of this generator jumped k times (Gaussian cache dropped).
    Rng substream(unsigned k) const {
        Rng r = *this;
        r.has_cached_ = false;
        for (unsigned i = 0; i < k; ++i) r.jump();
        return r;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::array<std::uint64_t, 4> state_{};
    double cached_gaussian_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace amcmc
