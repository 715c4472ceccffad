#pragma once

// Volume of the entropy body
//   E_k(t,B) = { (t_1,x_1..t_k,x_k) : 0 < t_1 < ... < t_k < t, Ent <= B }
// in closed form, a hit-or-miss Monte Carlo estimate of the same volume, and
// the lattice counting bound with its exhaustive companion counter.

#include <cstddef>
#include <cstdint>

#include "elpp/rng.hpp"

namespace elpp {

/// log C_k with C_k = pi^k 2^(-k/2) / (Gamma(k/2 + 1) Gamma(3k/2 + 1)).
double log_entropy_body_constant(std::size_t k);

/// C_k B^{k/2} t^{3k/2}, assembled in log space.
double volume_exact(std::size_t k, double t, double B);

struct VolumeEstimate {
  std::size_t k = 0;
  double t = 0.0;
  double B = 0.0;
  double exact = 0.0;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  SeedSpec seed;

  /// Pools two independent batches for the same (k, t, B).
  static VolumeEstimate merge(const VolumeEstimate& a, const VolumeEstimate& b);
};

/// Samples unordered k-tuples uniformly in ([0,t] x [-sqrt(2Bt), sqrt(2Bt)])^k,
/// sorts each tuple by time, tests Ent <= B, and scales the acceptance rate by
/// the box volume over k!. Requires 1 <= k <= 8 and samples >= 1000.
VolumeEstimate volume_mc(std::size_t k, double t, double B, std::uint64_t samples,
                         const SeedSpec& seed);

/// 2^k C_k B^{k/2} n^{3k/2}.
double count_bound_discrete(std::size_t k, std::int64_t n, double B);

/// Exact size of E_k(n,B) = { k-tuples in [[1,n]] x Z : t_1 < ... < t_k, Ent <= B }
/// by enumeration. Guarded to n <= 12, k <= 3.
std::uint64_t count_discrete_exact(std::size_t k, std::int64_t n, double B);

}  // namespace elpp
