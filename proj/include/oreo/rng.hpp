#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oreo {

// Deterministic seed derivation (splitmix64). Child streams never collide for
// distinct (seed, stream) pairs in practice.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seedable random source shared by engines, samplers and generators. All
// sampling goes through these helpers so traces replay identically for a
// given seed regardless of platform stdlib.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Unbiased integer in [0, n), rejection sampling.
    std::uint64_t bounded(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

    // 53-bit uniform in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1), safe for log().
    double uniform_open01() {
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Sample an index from unnormalized non-negative weights by CDF inversion.
    std::size_t weighted_index(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    // Geometric dwell length >= 1 with success probability p in (0, 1].
    std::uint64_t geometric(double p) {
        if (p >= 1.0) return 1;
        double u = uniform_open01();
        double len = std::floor(std::log1p(-u) / std::log1p(-p));
        return 1 + static_cast<std::uint64_t>(len);
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace oreo
