#pragma once

#include <cstdint>

namespace vdnet {

// Counter-based splitmix64 generator.  Cheap to seed, so every trajectory
// (and every sub-stream within a trajectory) gets its own independent
// deterministic stream derived from (seed, index) pairs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static Rng derived(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix(seed, index));
    }

    static Rng derived(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
        return Rng(mix(mix(seed, i), j));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n).
    int uniform_int(int n) {
        int k = static_cast<int>(uniform() * n);
        return k < n ? k : n - 1;
    }

private:
    std::uint64_t state_;
};

}  // namespace vdnet
