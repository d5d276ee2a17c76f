// Counter-based seeded generator: draw i is a pure function of (seed, i), so
// runs are reproducible and streams can be split without shared state.
#pragma once

#include <cstdint>

namespace hc2 {

struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t at(std::uint64_t i) const {
    std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t i) const {
    return static_cast<double>(at(i) >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) via the multiply-shift reduction.
  int below(std::uint64_t i, int n) const {
    return static_cast<int>(
        (static_cast<unsigned __int128>(at(i)) * static_cast<unsigned>(n)) >>
        64);
  }

  // Independent stream derived from a base seed and a stream index.
  static CounterRng stream(std::uint64_t base_seed, std::uint64_t stream_id) {
    CounterRng mix{base_seed ^ (0xA0761D6478BD642Full * (stream_id + 1))};
    return CounterRng{mix.at(0)};
  }
};

}  // namespace hc2
