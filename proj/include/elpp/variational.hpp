#pragma once

// Energy-entropy variational problems over finitely many weighted points:
//
//   T = max over time-increasing Delta of  beta * (sum of weights in Delta) - Ent(Delta)
//
// Energy and entropy are both additive along a time-ordered chain, so the
// maximum is a longest path in the DAG "origin -> points in time order",
// solved exactly in O(ell^2). The empty sequence is admissible (value 0).

#include <cstddef>
#include <span>
#include <vector>

#include "elpp/core.hpp"
#include "elpp/environment.hpp"
#include "elpp/rng.hpp"

namespace elpp {

struct VariationalResult {
  double value = 0.0;
  DeltaPath argmax;
  /// Entry indices (into the environment) of the argmax points, time order.
  std::vector<std::size_t> argmax_entries;
  std::size_t ell_used = 0;
  double beta = 0.0;

  /// Total weight collected by the argmax.
  double energy = 0.0;
};

/// Maximizes over the entries with index in [first, last). Ties between
/// predecessors go to the lowest canonical index, the origin first.
VariationalResult solve_on_entries(const Environment& env, std::size_t first, std::size_t last,
                                   double beta);

/// Restricts to the ell heaviest entries. ell = 0 yields value 0.
VariationalResult solve_variational(const Environment& env, double beta, std::size_t ell);

/// Uses only the entries beyond the ell-th (the tail energy). Requires
/// ell < number of entries.
VariationalResult solve_tail(const Environment& env, double beta, std::size_t ell);

/// Truncated continuum problem: ell ordered-statistic records of the Poisson
/// process on [0,1] x [-q,q], solved at beta = nu. The optimal continuous
/// path through finitely many points is their linear interpolation, so the
/// finite maximization is exact for the truncated problem.
VariationalResult continuum_T_truncated(double alpha, double nu, double q, std::size_t ell,
                                        const SeedSpec& seed);

struct BetaSweep {
  std::vector<double> betas;
  std::vector<double> values;
  std::vector<std::vector<std::size_t>> argmax_ids;  // sorted entry indices
};

/// Solves at every beta (ascending, nonnegative) and checks monotonicity and,
/// on a uniform grid, discrete convexity; a violation throws std::logic_error.
BetaSweep beta_sweep(const Environment& env, std::span<const double> betas, std::size_t ell);

struct UniquenessReport {
  bool unique = true;
  double best_value = 0.0;
  /// Every subset (sorted entry indices) attaining best_value.
  std::vector<std::vector<std::size_t>> maximizers;
};

/// Brute force over all 2^ell subsets of the ell heaviest entries; ell <= 15.
UniquenessReport check_maximizer_unique(const Environment& env, double beta, std::size_t ell);

}  // namespace elpp
