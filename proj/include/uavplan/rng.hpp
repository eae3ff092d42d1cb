#pragma once

#include <bit>
#include <cstdint>

namespace uavplan {

// splitmix64; used both as the generator state mixer and for seed
// derivation in sweeps so results do not depend on library internals.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Small deterministic generator with platform-independent output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi] inclusive
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    return lo + next() % span;
  }

 private:
  std::uint64_t state_;
};

// Cell seed for sweeps: mixing value bits and repetition index separately
// keeps every (value, rep) cell stable when other values are added.
inline std::uint64_t derive_seed(std::uint64_t base, double value,
                                 std::uint64_t rep) {
  return splitmix64(base ^ splitmix64(std::bit_cast<std::uint64_t>(value)) ^
                    splitmix64(rep + 0x51ed270b0a5ecb01ULL));
}

}  // namespace uavplan
