#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace mclump {

// Uniform double in [0, 1) from the top 53 bits of the generator output.
// std::uniform_real_distribution is implementation-defined; this mapping is
// identical on every platform, which keeps seeded runs byte-reproducible.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// splitmix64 finalizer; used to derive independent per-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Samples an index from a probability vector by inverse CDF. The weights
// are assumed to sum to 1; any float shortfall falls to the last positive
// entry.
inline int sample_index(std::span<const double> probs, std::mt19937_64& rng) {
    double u = uniform01(rng);
    double acc = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = static_cast<int>(i);
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return last_positive;
}

}  // namespace mclump
