#pragma once

// Random environments: point clouds, heavy-tailed lattice fields and
// continuum Poisson point processes, all stored in ordered-statistic form
// (entries sorted by weight, largest first).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elpp/core.hpp"
#include "elpp/rng.hpp"

namespace elpp {

enum class EnvKind { UniformCloud, LatticeCloud, LatticeField, Ppp };

std::string to_string(EnvKind kind);
EnvKind env_kind_from_string(const std::string& s);

struct Entry {
  double weight = 1.0;
  TimeSpacePoint location;

  friend bool operator==(const Entry&, const Entry&) = default;
};

struct Environment {
  EnvKind kind = EnvKind::UniformCloud;
  Box box;
  std::optional<double> alpha;  // tail exponent; absent for unweighted clouds
  SeedSpec seed;
  std::vector<Entry> entries;   // weights nonincreasing
  std::string method;           // sampling provenance, e.g. "order-statistic"

  std::size_t size() const noexcept { return entries.size(); }
  std::vector<TimeSpacePoint> locations() const;

  /// Checks ordering, box membership and lattice distinctness; throws
  /// ContractViolation describing the first failure.
  void validate() const;

  friend bool operator==(const Environment&, const Environment&) = default;
};

/// Unweighted environment holding the given points (kind UniformCloud or
/// LatticeCloud depending on the box). Used for hand-built instances; the
/// result is validated.
Environment make_cloud(const Box& box, std::vector<TimeSpacePoint> points);

/// Weighted environment from arbitrary entries; sorts them by weight
/// (descending, stable).
Environment make_weighted(const Box& box, std::vector<Entry> entries,
                          std::optional<double> alpha = std::nullopt);

/// m i.i.d. uniform points in the continuous box, weight 1 each.
Environment sample_uniform_cloud(std::size_t m, const Box& box, const SeedSpec& seed);

/// m distinct lattice points drawn uniformly without replacement from
/// [[1,n]] x [[-h,h]] by a partial Fisher-Yates shuffle over a sparse swap map.
Environment sample_lattice_cloud(std::size_t m, const Box& box, const SeedSpec& seed);

/// The top_k largest values of an i.i.d. Pareto(alpha) field on every site of
/// the lattice box, with their locations.
///
/// Order-statistic construction: with Gamma_r = E_1 + ... + E_r and N sites,
/// the r-th largest uniform spacing is Gamma_r / Gamma_{N+1}, so the r-th
/// largest weight is (Gamma_{N+1} / Gamma_r)^{1/alpha}. Gamma_{N+1} is
/// Gamma_k plus an independent Gamma(N + 1 - k) variate. Locations are a
/// uniform draw without replacement, independent of the weights.
///
/// Draw order on the stream: for each record, E_r and then a location pair
/// (U_t, U_x), with collisions redrawn in place; then the remainder gamma.
/// sample_ppp_ordered consumes records the same way, so equal seeds couple
/// the lattice field to the continuum process. When top_k exceeds half the
/// box, locations come from a sparse Fisher-Yates pass after the exponentials.
Environment sample_lattice_field(const Box& box, double alpha, const SeedSpec& seed,
                                 std::size_t top_k);

/// First ell ordered-statistic records of the Poisson process on
/// [0,inf) x [0,1] x [-q,q] with intensity (alpha/2) w^{-alpha-1} dw dt dx:
/// M_i = (2q)^{1/alpha} (E_1 + ... + E_i)^{-1/alpha}, Y_i uniform. Records
/// are drawn one at a time, so a shorter sample is a prefix of a longer one
/// with the same seed.
Environment sample_ppp_ordered(std::size_t ell, double alpha, double q, const SeedSpec& seed);

/// Same construction with the exponential variates and locations supplied.
Environment ppp_from_draws(double alpha, double q, std::span<const double> exponentials,
                           std::span<const TimeSpacePoint> locations);

/// Quantile m(x) = F^{-1}(1 - 1/x) of the Pareto(alpha) law, i.e. x^{1/alpha}.
double m_of(double x, double alpha);

}  // namespace elpp
