#pragma once

#include <cmath>
#include <cstdint>

namespace mil {

// Deterministic splittable generator. Every random quantity in the project is
// derived from one seed through named split() streams, so results are
// reproducible across runs and independent of thread scheduling.
//
// The core step is the splitmix64 sequence; split(stream) derives the child
// seed by remixing the current state with the stream tag, which keeps child
// streams decorrelated from the parent and from each other.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Child generator for an independent named stream. Does not advance *this.
  Rng split(std::uint64_t stream) const {
    return Rng(mix(state_ ^ mix(stream + 0x9e3779b97f4a7c15ull)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  // Standard normal via Box-Muller; uses exactly two uniforms per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace mil
