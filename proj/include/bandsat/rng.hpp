#pragma once

#include <cassert>
#include <cstdint>

namespace bandsat {

// SplitMix64: a Weyl counter with a 64-bit finalizer (Vigna's variant of
// Steele et al.'s generator). One instance per solver run; decimation,
// clause weighting, BMS and the bandit all draw from the same stream in
// program order, so a single seed pins an entire run bit-for-bit.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). Lemire's multiply-shift with rejection, so the
    // distribution is exact and the draw sequence is platform-independent.
    uint64_t below(uint64_t bound) {
        assert(bound >= 1);
        unsigned __int128 m = (unsigned __int128)next() * bound;
        uint64_t lo = (uint64_t)m;
        if (lo < bound) {
            uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = (unsigned __int128)next() * bound;
                lo = (uint64_t)m;
            }
        }
        return (uint64_t)(m >> 64);
    }

    int below_int(int bound) { return (int)below((uint64_t)bound); }

    // Uniform in [0, 1), 53 random bits.
    double unit() { return (double)(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    bool coin() { return (next() >> 63) != 0; }

private:
    uint64_t state_;
};

} // namespace bandsat
