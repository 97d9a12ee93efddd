#pragma once

#include <cmath>
#include <cstdint>

namespace weaklab {

// SplitMix64 stream generator. Chosen over std::mt19937 so that the
// exact byte stream is reproducible from the seed alone in any
// language: state advances by the 64-bit golden-ratio constant and each
// output is the standard finalizer mix of the new state.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform on [0, 1), 53-bit resolution
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]
  double next_unit_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // uniform integer in [0, n)
  int next_int(int n) {
    return static_cast<int>((static_cast<unsigned __int128>(next_u64()) * static_cast<uint64_t>(n)) >> 64);
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Box-Muller; consumes two uniforms per pair, caches the second draw
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u = next_unit_open();
    double v = next_unit();
    double r = std::sqrt(-2.0 * std::log(u));
    cached_ = r * std::sin(6.283185307179586476925286766559 * v);
    have_cached_ = true;
    return r * std::cos(6.283185307179586476925286766559 * v);
  }

 private:
  uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace weaklab
