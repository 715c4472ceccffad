#include "elpp/variational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elpp {
namespace {

void check_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ContractViolation("beta must be finite and >= 0");
}

}  // namespace

VariationalResult solve_on_entries(const Environment& env, std::size_t first, std::size_t last,
                                   double beta) {
  check_beta(beta);
  if (first > last || last > env.entries.size()) {
    throw ContractViolation("entry range out of bounds");
  }
  VariationalResult res;
  res.beta = beta;
  res.ell_used = last - first;
  const std::size_t n = last - first;
  if (n == 0) return res;

  std::vector<TimeSpacePoint> locs(n);
  for (std::size_t i = 0; i < n; ++i) locs[i] = env.entries[first + i].location;
  const auto perm = canonical_permutation(locs);

  std::vector<TimeSpacePoint> p(n);
  std::vector<double> gain(n);
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = locs[perm[j]];
    gain[j] = beta * env.entries[first + perm[j]].weight;
  }

  constexpr std::size_t kFromOrigin = static_cast<std::size_t>(-1);
  std::vector<double> best(n);
  std::vector<std::size_t> pred(n, kFromOrigin);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = -step_cost(kOrigin, p[j]);
    std::size_t arg = kFromOrigin;
    for (std::size_t i = 0; i < j && p[i].t < p[j].t; ++i) {
      const double cand = best[i] - step_cost(p[i], p[j]);
      if (cand > acc) {
        acc = cand;
        arg = i;
      }
    }
    best[j] = gain[j] + acc;
    pred[j] = arg;
  }

  std::size_t end = kFromOrigin;
  double top = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (best[j] > top) {
      top = best[j];
      end = j;
    }
  }
  if (end == kFromOrigin) return res;

  std::vector<std::size_t> chain;
  for (std::size_t j = end; j != kFromOrigin; j = pred[j]) chain.push_back(j);
  std::reverse(chain.begin(), chain.end());

  std::vector<TimeSpacePoint> pts;
  for (std::size_t j : chain) {
    pts.push_back(p[j]);
    res.argmax_entries.push_back(first + perm[j]);
    res.energy += env.entries[first + perm[j]].weight;
  }
  res.value = top;
  res.argmax = DeltaPath::from_points(std::move(pts));
  return res;
}

VariationalResult solve_variational(const Environment& env, double beta, std::size_t ell) {
  if (ell > env.entries.size()) {
    throw ContractViolation("solve_variational: ell exceeds the number of entries");
  }
  return solve_on_entries(env, 0, ell, beta);
}

VariationalResult solve_tail(const Environment& env, double beta, std::size_t ell) {
  if (ell >= env.entries.size()) {
    throw ContractViolation("solve_tail: ell must be smaller than the number of entries");
  }
  auto res = solve_on_entries(env, ell, env.entries.size(), beta);
  return res;
}

VariationalResult continuum_T_truncated(double alpha, double nu, double q, std::size_t ell,
                                        const SeedSpec& seed) {
  check_beta(nu);
  const Environment env = sample_ppp_ordered(ell, alpha, q, seed);
  return solve_variational(env, nu, ell);
}

BetaSweep beta_sweep(const Environment& env, std::span<const double> betas, std::size_t ell) {
  BetaSweep sweep;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    check_beta(betas[i]);
    if (i > 0 && betas[i] < betas[i - 1]) throw ContractViolation("betas must be ascending");
  }
  for (double b : betas) {
    auto r = solve_variational(env, b, ell);
    auto ids = r.argmax_entries;
    std::sort(ids.begin(), ids.end());
    sweep.betas.push_back(b);
    sweep.values.push_back(r.value);
    sweep.argmax_ids.push_back(std::move(ids));
  }

  const auto& v = sweep.values;
  auto slack = [](double a) { return 1e-9 * (1.0 + std::abs(a)); };
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] - slack(v[i - 1])) {
      throw std::logic_error("beta_sweep: value decreased in beta");
    }
  }
  bool uniform = betas.size() >= 3;
  for (std::size_t i = 2; uniform && i < betas.size(); ++i) {
    const double d0 = betas[i - 1] - betas[i - 2];
    const double d1 = betas[i] - betas[i - 1];
    uniform = std::abs(d1 - d0) <= 1e-12 * std::max(1.0, std::abs(betas[i]));
  }
  if (uniform) {
    for (std::size_t i = 2; i < v.size(); ++i) {
      if (v[i] - 2.0 * v[i - 1] + v[i - 2] < -1e-9 - slack(v[i])) {
        throw std::logic_error("beta_sweep: value is not convex in beta");
      }
    }
  }
  return sweep;
}

UniquenessReport check_maximizer_unique(const Environment& env, double beta, std::size_t ell) {
  check_beta(beta);
  if (ell > 15) throw ContractViolation("check_maximizer_unique: ell must be <= 15");
  if (ell > env.entries.size()) throw ContractViolation("ell exceeds the number of entries");

  std::vector<std::size_t> order(ell);
  {
    std::vector<TimeSpacePoint> locs(ell);
    for (std::size_t i = 0; i < ell; ++i) locs[i] = env.entries[i].location;
    order = canonical_permutation(locs);
  }

  UniquenessReport report;
  report.best_value = 0.0;
  report.maximizers.push_back({});
  std::vector<TimeSpacePoint> pts;
  for (std::uint32_t mask = 1; mask < (1u << ell); ++mask) {
    pts.clear();
    double energy = 0.0;
    std::vector<std::size_t> ids;
    for (std::size_t k = 0; k < ell; ++k) {
      const std::size_t e = order[k];
      if (mask & (1u << e)) {
        pts.push_back(env.entries[e].location);
        energy += env.entries[e].weight;
        ids.push_back(e);
      }
    }
    const double ent = entropy(pts);
    if (!std::isfinite(ent)) continue;
    const double val = beta * energy - ent;
    if (val > report.best_value) {
      report.best_value = val;
      report.maximizers.clear();
    }
    if (val == report.best_value) {
      std::sort(ids.begin(), ids.end());
      report.maximizers.push_back(std::move(ids));
    }
  }
  report.unique = report.maximizers.size() == 1;
  return report;
}

}  // namespace elpp
