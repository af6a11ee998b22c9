#pragma once

#include <cmath>
#include <cstdint>
#include <iterator>
#include <random>
#include <string_view>
#include <utility>

namespace gstep {

/// Name recorded in output metadata so results can be reproduced.
inline constexpr std::string_view kGeneratorName = "mt19937_64+polar-normal";

/// Seeded generator with platform-independent derived distributions.
/// The standard library's distributions are implementation-defined, so
/// uniform, normal and bounded-integer draws are built here directly on the
/// raw 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  /// Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x < limit);
    return x % bound;
  }

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(std::distance(first, last));
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      using std::swap;
      swap(*(first + static_cast<std::ptrdiff_t>(i - 1)),
           *(first + static_cast<std::ptrdiff_t>(j)));
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Seed of the index-th replicate derived from a campaign seed (mod 2^64).
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  return base + index * 2654435761ULL;
}

}  // namespace gstep
