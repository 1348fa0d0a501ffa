#pragma once
#include <cstdint>

namespace rectbound {

// Counter-based splittable RNG. Every consumer derives its stream from a
// single 64-bit seed and a counter, so parallel trial order never changes
// the numbers a given trial sees.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in {0,...,n-1}, n > 0 (rejection-free Lemire reduction is
    // overkill at desk scale; modulo bias is < 2^-40 for n <= 2^24)
    uint64_t next_below(uint64_t n) { return next() % n; }

    uint64_t next_bits(int k) { return next() >> (64 - k); }
};

// Derive an independent stream for (seed, counter) pairs.
inline uint64_t split_seed(uint64_t seed, uint64_t counter) {
    SplitMix64 g(seed ^ (0x6a09e667f3bcc909ULL + counter * 0x9e3779b97f4a7c15ULL));
    g.next();
    return g.next();
}

} // namespace rectbound
