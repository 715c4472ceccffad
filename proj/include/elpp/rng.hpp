#pragma once

// Deterministic random streams.
//
// Every random quantity in the library is drawn from a Xoshiro256** generator
// whose 256-bit state is derived from a (master_seed, stream_index) pair by
// SplitMix64 mixing. Replica r of an experiment always uses stream r, so
// results never depend on how replicas are scheduled across threads.

#include <array>
#include <cstdint>
#include <limits>

namespace elpp {

/// Identity of the generator, recorded in every experiment record.
inline constexpr const char* kGeneratorId = "xoshiro256**/splitmix64-v1";

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const std::array<std::uint64_t, 4>& state) noexcept : s_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }

  result_type next() noexcept {
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

  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0,1).
  double uniform_open() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by Lemire's nearly-divisionless method.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard exponential by inversion, -ln(1 - U), with U in (0,1).
  double exponential() noexcept;

  /// Standard normal (Marsaglia polar method, second variate cached).
  double normal() noexcept;

  /// Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang squeeze).
  double gamma(double shape);

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Initial generator for a seed stream; a pure function of both fields.
Rng derive_stream(const SeedSpec& seed) noexcept;

}  // namespace elpp
