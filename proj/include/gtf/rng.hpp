#pragma once

#include <cstdint>

namespace gtf {

// splitmix64 stream. Deterministic across platforms, unlike the standard
// library distributions, which is what lets seeds in PoC headers and test
// expectations stay stable.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). n must be > 0.
    uint64_t below(uint64_t n) {
        // Rejection sampling keeps this unbiased for any n.
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    // Derive an independent stream; mixes the tag through one splitmix step.
    uint64_t fork_seed(uint64_t tag) {
        uint64_t z = next() + tag * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        return z ^ (z >> 27);
    }

  private:
    uint64_t state_;
};

// Stateless mix for deriving per-worker / per-sequence seeds from a campaign
// seed without sharing a stream.
inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace gtf
