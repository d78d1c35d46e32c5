#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace qkd {

// Counter-based generator built on the splitmix64 finalizer.
//
// Every object remembers the seed it was constructed with, so split(key)
// derives the same child stream no matter how many values were drawn from
// the parent.  Work is sharded by handing each unit (round, sample, ...)
// its own split child, which makes results independent of worker count
// and stable when a sample budget grows.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  // Child stream identified by `key`; depends only on this object's seed.
  SplitRng split(std::uint64_t key) const {
    return SplitRng(mix(seed_ + kGamma * (key + 1)));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); unbiased (multiply-shift with rejection).
  std::uint64_t next_below(std::uint64_t n) {
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<u128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard complex Gaussian: both components N(0, 1), via Box-Muller.
  std::complex<double> next_cnormal() {
    double u1 = next_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace qkd
