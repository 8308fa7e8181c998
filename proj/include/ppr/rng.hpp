#pragma once

#include <cstdint>

namespace ppr {

// splitmix64 finalizer (Steele et al.); the workhorse behind all seeding here.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based substream keyed by (seed, index). Each vector entry gets its
// own stream, so sampled fields do not depend on evaluation order or thread
// count.
class IndexStream {
 public:
  IndexStream(std::uint64_t seed, std::uint64_t index)
      : state_(splitmix64(splitmix64(seed) ^ splitmix64(index ^ 0xA0761D6478BD642FULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // (0, 1]
  double next_u01_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double next_gaussian();

 private:
  std::uint64_t state_;
};

// Poisson(mean) sample: sequential inversion for small means, Hoermann's PTRS
// transformed rejection above. Deterministic given the stream state.
std::uint64_t poisson_sample(double mean, IndexStream& rng);

}  // namespace ppr
