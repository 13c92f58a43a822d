#pragma once

#include <cstdint>
#include <random>

namespace photonmux {

// Deterministic uniform stream. Callers own their streams; streams are never
// shared between concurrent workers.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1), built from the top 53 bits of the engine so the
    // mapping is fixed by the engine specification, not the standard library.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

  private:
    std::mt19937_64 engine_;
};

// SplitMix64 output function over (seed, counter). Used to derive one
// independent stream per work chunk so results do not depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline RandomStream stream_for_chunk(std::uint64_t seed, std::uint64_t chunk_index) {
    return RandomStream(mix_seed(seed, chunk_index));
}

}  // namespace photonmux
