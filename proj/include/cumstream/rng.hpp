#pragma once

// Deterministic random streams: a master seed is split per stream id
// through splitmix64, each stream drives its own xoshiro256++ engine.
// Variates are produced by inverse CDF so sequences are reproducible
// bit-for-bit across platforms and toolchains.

#include <cstdint>

namespace cumstream {

struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  // Independent stream `stream` of the generator family keyed by `seed`.
  static Xoshiro256pp seeded(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next() noexcept;

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~0ull; }
  std::uint64_t operator()() noexcept { return next(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01() noexcept;

  // Standard normal via the inverse CDF.
  double normal() noexcept;

  // Gamma(shape, 1).  Pre: shape > 0.
  double gamma(double shape) noexcept;

  // Chi-square with dof degrees of freedom.  Pre: dof > 0.
  double chi_square(double dof) noexcept { return 2.0 * gamma(0.5 * dof); }

 private:
  std::uint64_t s_[4] = {};
};

}  // namespace cumstream
