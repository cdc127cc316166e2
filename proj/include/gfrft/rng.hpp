#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace gfrft::rng {

// Scheme identifier recorded in run metadata. splitmix64 + Box-Muller is used
// instead of <random> distributions because normal_distribution output is not
// reproducible across standard libraries, and runs must be byte-identical per
// (config, seed) on every platform.
inline constexpr const char* kSchemeId = "splitmix64-bm/1";

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix64(z);
  }

  // Uniform in (0, 1]; never 0 so log() in the Gaussian path is safe.
  double uniform() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased draw from {0, ..., n-1} by rejection.
  uint64_t uniform_index(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller; the paired sine draw is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    constexpr double kTwoPi = 6.283185307179586476925287;
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = kTwoPi * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Deterministic child seed for (seed, path...). Each trial / strategy /
// purpose gets its own stream so draws never alias between cells.
inline uint64_t derive(uint64_t seed, std::initializer_list<uint64_t> path) {
  uint64_t s = mix64(seed ^ 0x6a09e667f3bcc908ULL);
  for (uint64_t p : path) {
    s = mix64(s ^ (p + 0x9e3779b97f4a7c15ULL));
  }
  return s;
}

}  // namespace gfrft::rng
