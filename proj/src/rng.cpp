#include "elpp/rng.hpp"

#include <cmath>

#include "elpp/core.hpp"

namespace elpp {

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  if (bound == 0) return 0;
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::exponential() noexcept { return -std::log(1.0 - uniform_open()); }

double Rng::normal() noexcept {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  has_cached_normal_ = true;
  return u * f;
}

double Rng::gamma(double shape) {
  if (!(shape >= 1.0)) throw ContractViolation("gamma sampler requires shape >= 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * (z * z) * (z * z)) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Rng derive_stream(const SeedSpec& seed) noexcept {
  // Mix the stream index through its own SplitMix step before combining so
  // that adjacent (master, stream) pairs land far apart in seed space.
  std::uint64_t sidx = seed.stream_index ^ 0xD1B54A32D192ED03ULL;
  const std::uint64_t stream_key = splitmix64(sidx);
  std::uint64_t sm = seed.master_seed ^ stream_key;
  std::array<std::uint64_t, 4> st{};
  for (auto& w : st) w = splitmix64(sm);
  if ((st[0] | st[1] | st[2] | st[3]) == 0) st[0] = 1;
  return Rng(st);
}

}  // namespace elpp
