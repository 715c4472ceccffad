#pragma once

// Entropy-controlled last passage percolation.
//
// The maximal number of cloud points that a time-increasing path from the
// origin can visit while keeping its entropy at most B. Solved exactly by a
// dynamic program over (endpoint, count) labels: minEnt[j][k] is the least
// entropy of a k-point sequence ending at cloud point j.
//
// Dropping an interior point never increases entropy, so minEnt[j][k] is
// nondecreasing in k and the labels below a cap always form a prefix
// k = 1..K_j. The frontier stores exactly those prefixes.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "elpp/core.hpp"
#include "elpp/environment.hpp"

namespace elpp {

struct FrontierOptions {
  /// Labels with entropy above the cap are discarded. +inf keeps everything.
  double entropy_cap = kInfinity;
  /// Hard cap on the count dimension (0 = unbounded). Bounds memory at m * k_max.
  std::size_t k_max = 0;
};

class ParetoFrontier {
 public:
  std::size_t num_points() const noexcept { return points_.size(); }
  /// Cloud point j in canonical (t, x, index) order.
  const TimeSpacePoint& point(std::size_t j) const { return points_.at(j); }
  /// Position of canonical point j in the environment's entry list.
  std::size_t source_index(std::size_t j) const { return source_.at(j); }

  /// minEnt[j][1..K_j]; element k-1 holds the count-k label.
  std::span<const double> row(std::size_t j) const;
  /// minEnt[j][k], +inf when no admissible k-point sequence ends at j.
  double min_entropy(std::size_t j, std::size_t k) const;
  /// Largest k with at least one admissible label.
  std::size_t max_count() const noexcept { return max_count_; }

  /// Predecessor of the optimal count-k label at j: the lowest canonical
  /// index i with minEnt[i][k-1] + step_cost(i -> j) == minEnt[j][k], or
  /// nullopt when the predecessor is the origin (k == 1).
  std::optional<std::size_t> predecessor(std::size_t j, std::size_t k) const;

  /// Canonical indices of the optimal count-k sequence ending at j.
  std::vector<std::size_t> path_indices(std::size_t j, std::size_t k) const;
  DeltaPath path(std::size_t j, std::size_t k) const;

  const FrontierOptions& options() const noexcept { return options_; }

 private:
  friend ParetoFrontier build_frontier(std::span<const TimeSpacePoint>, const FrontierOptions&);

  FrontierOptions options_;
  std::vector<TimeSpacePoint> points_;
  std::vector<std::size_t> source_;
  std::vector<std::size_t> offsets_;  // row j is values_[offsets_[j], offsets_[j+1])
  std::vector<double> values_;
  std::size_t max_count_ = 0;
};

ParetoFrontier build_frontier(std::span<const TimeSpacePoint> points,
                              const FrontierOptions& options = {});
ParetoFrontier build_frontier(const Environment& env, const FrontierOptions& options = {});

struct ElppResult {
  std::size_t value = 0;
  DeltaPath witness;
  /// Source entry indices of the witness points.
  std::vector<std::size_t> witness_entries;
  std::optional<ParetoFrontier> frontier;
};

/// Exact E-LPP value for budget B >= 0 with a witness path.
/// With k_max set, the value saturates at k_max.
ElppResult elpp_value(const Environment& env, double budget, std::size_t k_max = 0,
                      bool keep_frontier = false);

enum class LppAlgorithm {
  /// Full budget-capped frontier, O(m^2 K).
  Frontier,
  /// Lagrangian bracketing plus a label-pruned frontier when the bounds differ.
  Bounded,
};

struct BoundedLppStats {
  std::size_t relaxed_passes = 0;
  std::size_t lower_bound = 0;
  std::size_t upper_bound = 0;
  bool used_frontier = false;
};

/// Value only (no witness); used by the Monte Carlo harnesses. Both
/// algorithms are exact and return the same count.
std::size_t elpp_count(std::span<const TimeSpacePoint> points, double budget,
                       LppAlgorithm algorithm = LppAlgorithm::Bounded,
                       BoundedLppStats* stats = nullptr);

/// Least entropy of a sequence collecting k points (equivalently at least k),
/// +inf when no time-increasing k-subset exists. Requires 1 <= k <= m.
double min_entropy_for_count(const Environment& env, std::size_t k);

/// Exhaustive oracle over all 2^m subsets; m <= 20.
std::size_t brute_force_elpp(const Environment& env, double budget);

}  // namespace elpp
