#pragma once

#include <cstdint>
#include <vector>

namespace mpc {

// splitmix64 finalizer; the only hash primitive used for routing and seeding,
// so runs replay bit-exactly across platforms.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic generator (splitmix64 stream). Not std::mt19937 on purpose:
// std::uniform_int_distribution is implementation-defined, this is not.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, bound), bound >= 1
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  double unit() {  // uniform in [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates permutation of the values 1..n.
inline std::vector<std::uint32_t> random_permutation(std::size_t n, SplitMix& rng) {
  std::vector<std::uint32_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint32_t>(i + 1);
  for (std::size_t i = n; i > 1; --i) {
    std::uint64_t j = rng.below(i);
    std::swap(v[i - 1], v[j]);
  }
  return v;
}

}  // namespace mpc
