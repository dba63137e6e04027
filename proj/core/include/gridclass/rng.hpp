#pragma once

#include <cstdint>

namespace gridclass {

// SplitMix64. Used both as a stream mixer and as a standalone generator so
// that all randomness in the project is platform-independent (no
// std::uniform_*_distribution, whose output is implementation-defined).
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n >= 1. Rejection-free modulo bias is
    // negligible for the small n used here, but reject anyway to keep draws
    // exactly uniform.
    uint64_t uniform_int(uint64_t n) {
        uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }
};

// Stateless mixing of several 64-bit words into one stream seed. Independent
// substreams (per run, per cell visit, ...) are derived by hashing their
// coordinates together with the master seed.
inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    Rng r(a ^ (b * 0xd1342543de82ef95ULL) ^ 0x2545f4914f6cdd1dULL);
    r.next();
    return r.next();
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    return mix_seed(mix_seed(a, b, c), d);
}

}  // namespace gridclass
