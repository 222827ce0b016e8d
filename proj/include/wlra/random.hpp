#ifndef WLRA_RANDOM_HPP
#define WLRA_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wlra {

// Seedable random source used by every randomized routine in the library.
//
// The algorithm is pinned so that a reimplementation in another language can
// match streams bit for bit:
//   * engine: std::mt19937_64 seeded directly with the 64-bit seed. The
//     mt19937_64 sequence is fully specified by the C++ standard.
//   * uniform():  ((x >> 11) + 1) * 2^-53 where x is the next engine word,
//     giving a double in (0, 1].
//   * normal():   Box-Muller on two uniform() draws u1, u2:
//     z0 = sqrt(-2 ln u1) cos(2 pi u2), z1 = sqrt(-2 ln u1) sin(2 pi u2).
//     z0 is returned first, z1 is cached and returned by the next call.
//   * index(n):   rejection sampling: with m = 2^64 - 1, draw x, reject
//     while x >= m - (m mod n), then return x mod n. Unbiased and portable.
//   * bit():      lowest bit of the next engine word.
//
// Identified in reports and sidecars as kRngName.
inline constexpr const char* kRngName = "mt19937_64/box-muller";

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t word() { return engine_(); }

  // Uniform double in (0, 1].
  double uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; generates pairs, caches the second value.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  int bit() { return static_cast<int>(engine_() & 1u); }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wlra

#endif
