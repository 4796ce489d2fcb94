#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace dfrsim {

// Deterministic random streams built on the splitmix64 mixer. The standard
// <random> distributions are implementation-defined, so every transform here
// is spelled out: results are byte-identical across compilers and platforms.

inline constexpr std::uint64_t kGolden64 = 0x9e3779b97f4a7c15ull;

inline std::uint64_t splitmix_next(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden64);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rand {
 public:
  explicit Rand(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix_next(state_); }

  // Uniform on (0, 1]; never returns 0 so log() is safe.
  double uniform01() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53; }

  // Uniform on [0, 1).
  double uniform01_halfopen() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  // Standard normal via Box-Muller.
  double gauss() {
    double u = uniform01();
    double v = uniform01_halfopen();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream from a list of key integers (seed, purpose
// tag, trial index, entity ids...). Every random quantity in the simulator
// owns such a substream, so growing a deployment never disturbs the draws of
// entities that already existed.
inline Rand substream(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = 0x8fb3d2a67c190ec5ull;
  for (std::uint64_t k : keys) {
    h ^= k + kGolden64 + (h << 6) + (h >> 2);
    std::uint64_t s = h;
    h = splitmix_next(s);
  }
  return Rand(h);
}

}  // namespace dfrsim
