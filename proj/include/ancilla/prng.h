#pragma once

#include <cstdint>

namespace ancilla {

/// splitmix64 (Steele, Lea, Flood). Each call advances the state by the
/// golden-ratio increment and returns the mixed value. `uniform()` keeps the
/// top 53 bits, giving a double in [0, 1).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

/// Seed used for shot `shot` of a run seeded with `seed`.
inline std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t shot) {
    return seed + shot;
}

}  // namespace ancilla
