#include "cumstream/rng.hpp"

#include <cmath>

#include "cumstream/mathfn.hpp"

namespace cumstream {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Xoshiro256pp Xoshiro256pp::seeded(std::uint64_t seed, std::uint64_t stream) noexcept {
  SplitMix64 sm{seed ^ (0x9E3779B97F4A7C15ull * (stream + 1))};
  Xoshiro256pp g;
  for (auto& s : g.s_) s = sm.next();
  if ((g.s_[0] | g.s_[1] | g.s_[2] | g.s_[3]) == 0) g.s_[0] = 1;  // never all-zero
  return g;
}

std::uint64_t Xoshiro256pp::next() noexcept {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256pp::uniform01() noexcept {
  // 53 high bits, shifted off the open bounds.
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Xoshiro256pp::normal() noexcept { return norm_cdf_inv(uniform01()); }

double Xoshiro256pp::gamma(double shape) noexcept {
  if (!(shape > 0.0)) return std::nan("");
  if (shape < 1.0) {
    // Boost a draw of shape + 1 down by a uniform power.
    const double u = uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace cumstream
