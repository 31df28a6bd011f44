#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace actsem {

// Deterministic random source. Wraps mt19937_64 but avoids std::*_distribution,
// whose output is not pinned by the standard and differs across library
// implementations; results must be reproducible from a seed alone.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform index in [0, n) via rejection sampling.
    size_t next_index(size_t n) {
        if (n == 0) throw std::invalid_argument("next_index: n must be positive");
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return static_cast<size_t>(v % n);
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Seed for a derived generator; advances this stream by one draw.
    uint64_t fork_seed() { return eng_() ^ 0x9e3779b97f4a7c15ULL; }

private:
    std::mt19937_64 eng_;
};

}  // namespace actsem
