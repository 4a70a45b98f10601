#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace screp {

// Deterministic RNG wrapper. All randomness in the pipeline flows through
// this type so that a run is a pure function of its seeds. The uniform
// mappings are written out explicitly because std::*_distribution output
// is implementation-defined and would break byte-identical reruns across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Uniform index in [0, n). n must be > 0.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(gen_() % n);
    }

private:
    std::mt19937_64 gen_;
};

// Fisher-Yates shuffle driven by Rng (std::shuffle's draw sequence is
// implementation-defined).
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
        std::size_t j = rng.index(i + 1);
        std::swap(v[i], v[j]);
    }
}

// Stable seed derivation for independent RNG streams (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace screp
