#include "elpp/lpp_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace elpp {
namespace {

// Number of leading row entries v with v + c <= cap. Rows are nondecreasing
// and float addition is monotone, so the predicate partitions the row.
std::size_t admissible_prefix(const double* row, std::size_t len, double c, double cap) {
  if (row[len - 1] + c <= cap) return len;
  std::size_t lo = 0, hi = len;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (row[mid] + c <= cap) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

std::span<const double> ParetoFrontier::row(std::size_t j) const {
  if (j >= points_.size()) throw ContractViolation("frontier row index out of range");
  return {values_.data() + offsets_[j], offsets_[j + 1] - offsets_[j]};
}

double ParetoFrontier::min_entropy(std::size_t j, std::size_t k) const {
  if (k == 0) throw ContractViolation("counts start at 1");
  const auto r = row(j);
  return k <= r.size() ? r[k - 1] : kInfinity;
}

std::optional<std::size_t> ParetoFrontier::predecessor(std::size_t j, std::size_t k) const {
  const double target = min_entropy(j, k);
  if (!std::isfinite(target)) throw ContractViolation("no admissible label at (j, k)");
  if (k == 1) return std::nullopt;
  const auto& pj = points_[j];
  for (std::size_t i = 0; i < j && points_[i].t < pj.t; ++i) {
    const auto r = row(i);
    if (r.size() < k - 1) continue;
    if (r[k - 2] + step_cost(points_[i], pj) == target) return i;
  }
  throw std::logic_error("frontier is inconsistent: no predecessor reproduces the label");
}

std::vector<std::size_t> ParetoFrontier::path_indices(std::size_t j, std::size_t k) const {
  std::vector<std::size_t> out(k);
  std::size_t cur = j;
  for (std::size_t c = k; c >= 1; --c) {
    out[c - 1] = cur;
    const auto pred = predecessor(cur, c);
    if (!pred) break;
    cur = *pred;
  }
  return out;
}

DeltaPath ParetoFrontier::path(std::size_t j, std::size_t k) const {
  std::vector<TimeSpacePoint> pts;
  for (std::size_t i : path_indices(j, k)) pts.push_back(points_[i]);
  return DeltaPath::from_points(std::move(pts));
}

ParetoFrontier build_frontier(std::span<const TimeSpacePoint> points,
                              const FrontierOptions& options) {
  ParetoFrontier f;
  f.options_ = options;
  const double cap = options.entropy_cap;
  const std::size_t k_max = options.k_max == 0 ? points.size() : options.k_max;

  const auto perm = canonical_permutation(points);
  const std::size_t m = points.size();
  f.points_.reserve(m);
  f.source_ = perm;
  for (std::size_t i : perm) f.points_.push_back(points[i]);
  f.offsets_.assign(1, 0);
  f.offsets_.reserve(m + 1);

  // Structure-of-arrays copy of the points that carry at least one label.
  std::vector<double> at, ax, afirst;
  std::vector<std::size_t> aoff, alen;
  at.reserve(m);
  ax.reserve(m);
  afirst.reserve(m);
  aoff.reserve(m);
  alen.reserve(m);

  std::vector<double> cur;
  cur.reserve(std::min(k_max, m) + 1);

  for (std::size_t j = 0; j < m; ++j) {
    const TimeSpacePoint pj = f.points_[j];
    const double c0 = step_cost(kOrigin, pj);
    if (!(c0 <= cap) || k_max == 0) {
      f.offsets_.push_back(f.values_.size());
      continue;
    }
    cur.assign(1, c0);
    const std::size_t n_alive = at.size();
    for (std::size_t a = 0; a < n_alive; ++a) {
      const double dt = pj.t - at[a];
      if (!(dt > 0.0)) break;  // remaining alive points share t_j
      const double dx = pj.x - ax[a];
      const double c = 0.5 * dx * dx / dt;
      if (!(afirst[a] + c <= cap)) continue;
      const double* ri = f.values_.data() + aoff[a];
      std::size_t len = admissible_prefix(ri, alen[a], c, cap);
      len = std::min(len, k_max - 1);
      if (len + 1 > cur.size()) cur.resize(len + 1, kInfinity);
      double* out = cur.data() + 1;
      for (std::size_t k = 0; k < len; ++k) {
        const double v = ri[k] + c;
        out[k] = v < out[k] ? v : out[k];
      }
    }
    at.push_back(pj.t);
    ax.push_back(pj.x);
    afirst.push_back(c0);
    aoff.push_back(f.values_.size());
    alen.push_back(cur.size());
    f.values_.insert(f.values_.end(), cur.begin(), cur.end());
    f.offsets_.push_back(f.values_.size());
    f.max_count_ = std::max(f.max_count_, cur.size());
  }
  return f;
}

ParetoFrontier build_frontier(const Environment& env, const FrontierOptions& options) {
  const auto locs = env.locations();
  return build_frontier(locs, options);
}

ElppResult elpp_value(const Environment& env, double budget, std::size_t k_max,
                      bool keep_frontier) {
  if (!(budget >= 0.0)) throw ContractViolation("entropy budget must be >= 0");
  ElppResult result;
  if (env.entries.empty()) return result;
  auto frontier = build_frontier(env, FrontierOptions{budget, k_max});
  const std::size_t k = frontier.max_count();
  if (k > 0) {
    // Endpoint with the least entropy at the optimal count; lowest index on ties.
    std::size_t best_j = 0;
    double best = kInfinity;
    for (std::size_t j = 0; j < frontier.num_points(); ++j) {
      const double v = frontier.min_entropy(j, k);
      if (v < best) {
        best = v;
        best_j = j;
      }
    }
    result.value = k;
    const auto idx = frontier.path_indices(best_j, k);
    std::vector<TimeSpacePoint> pts;
    for (std::size_t i : idx) {
      pts.push_back(frontier.point(i));
      result.witness_entries.push_back(frontier.source_index(i));
    }
    result.witness = DeltaPath::from_points(std::move(pts));
  }
  if (keep_frontier) result.frontier = std::move(frontier);
  return result;
}

double min_entropy_for_count(const Environment& env, std::size_t k) {
  if (k == 0 || k > env.entries.size()) {
    throw ContractViolation("min_entropy_for_count: need 1 <= k <= m");
  }
  const auto frontier = build_frontier(env, FrontierOptions{kInfinity, k});
  double best = kInfinity;
  for (std::size_t j = 0; j < frontier.num_points(); ++j) {
    best = std::min(best, frontier.min_entropy(j, k));
  }
  return best;
}

std::size_t brute_force_elpp(const Environment& env, double budget) {
  const std::size_t m = env.entries.size();
  if (m > 20) throw ContractViolation("brute_force_elpp: m must be <= 20");
  const auto pts = canonical_order(env.locations());
  std::size_t best = 0;
  std::vector<TimeSpacePoint> subset;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size <= best) continue;
    subset.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) subset.push_back(pts[i]);
    }
    if (entropy(subset) <= budget) best = size;
  }
  return best;
}

}  // namespace elpp
