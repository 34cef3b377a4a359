/**
 * @file rng.hpp
 * @brief Deterministic random streams (splitmix64 / xoshiro256**).
 *
 * std::random distributions are implementation-defined, so every draw here is
 * produced by our own arithmetic. Identical seeds give identical streams on
 * every platform, which the reporting layer depends on.
 */
#pragma once

#include <cmath>
#include <cstdint>

#include "statlin/rational.hpp"

namespace statlin {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = detail::splitmix64(sm);
  }

  /// Independent stream derived from this seed and a stream index.
  [[nodiscard]] Rng stream(std::uint64_t index) const {
    std::uint64_t mix = s_[0] ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return Rng(mix);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Random rational with numerator in [-max_num, max_num] and denominator in [1, max_den].
  Rat rational(std::int64_t max_num, std::int64_t max_den) {
    const std::int64_t p = uniform_int(-max_num, max_num);
    const std::int64_t q = uniform_int(1, max_den);
    Rat r(static_cast<long>(p), static_cast<long>(q));
    r.canonicalize();
    return r;
  }

  /// Uniform rational in [-bound, bound] on a dyadic grid of the given resolution.
  Rat rational_in(const Rat& bound, int grid_bits = 20) {
    const std::int64_t grid = std::int64_t(1) << grid_bits;
    const std::int64_t k = uniform_int(-grid, grid);
    Rat r(static_cast<long>(k), static_cast<long>(grid));
    r.canonicalize();
    return r * bound;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4] = {};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace statlin
