#pragma once

#include <cstdint>
#include <random>

namespace garchm {

double normal_quantile(double p);  // special.cpp

// splitmix64 step; used to derive independent seed streams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for sub-stream `stream` of `master`. Streams with distinct ids are
// independent for practical purposes and reproducible across runs.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream * 0xD6E8FEB86659FD93ULL + 1));
}

// mt19937_64 with explicit inverse-CDF transforms. std::*_distribution is
// implementation-defined, so all sampling goes through uniform01() to keep
// results bit-reproducible for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // strictly inside (0,1)
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal() { return normal_quantile(uniform01()); }

    double exponential() { return -std::log(uniform01()); }  // mean 1

    std::uint64_t next_index(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
};

}  // namespace garchm
