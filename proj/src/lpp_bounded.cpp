// Exact E-LPP value by Lagrangian bounding.
//
// For a multiplier lambda > 0 let Opt(lambda) = max over paths of
// lambda * |Delta| - Ent(Delta). Any path with Ent <= B and k points has
// lambda * k - B <= Opt(lambda), hence k <= (Opt + B) / lambda. A maximizer
// of the relaxed problem with entropy <= B is a feasible path. Walking the
// breakpoints of Opt brackets the answer between these two bounds; when they differ, a
// frontier DP restricted to labels that can still beat the lower bound
// settles it exactly.
//
// Both relaxed passes and the restricted frontier only visit predecessor
// pairs that can matter: candidates are bucketed in x-bands, each band keeps
// a running maximum of the relaxed value in time order, and a band scan
// stops once that maximum minus the least possible step cost can no longer
// reach the current threshold.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "elpp/lpp_solver.hpp"

namespace elpp {
namespace {

constexpr double kNegInf = -kInfinity;

double slack(double v) { return 1e-9 * (1.0 + std::abs(v)); }

// Uniform x-bands over the span of the cloud.
struct BandIndex {
  double x_lo = 0.0;
  double width = 1.0;
  std::size_t count = 1;

  BandIndex() = default;
  explicit BandIndex(const std::vector<double>& xs) {
    if (xs.empty()) return;
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    x_lo = *mn;
    const double span = *mx - *mn;
    const double root = std::sqrt(static_cast<double>(xs.size()));
    count = std::clamp<std::size_t>(static_cast<std::size_t>(root / 4.0), 1, 64);
    width = span > 0.0 ? span / static_cast<double>(count) : 1.0;
  }

  std::size_t band_of(double x) const {
    const auto b = static_cast<std::size_t>(std::max(0.0, (x - x_lo) / width));
    return std::min(b, count - 1);
  }

  // Distance from x to band b's closed interval.
  double distance(double x, std::size_t b) const {
    const double a = x_lo + width * static_cast<double>(b);
    const double z = a + width;
    if (x < a) return a - x;
    if (x > z) return x - z;
    return 0.0;
  }
};

// Processed points of one band, in processing order, with the running max
// of their potential.
struct Band {
  std::vector<TimeSpacePoint> pts;
  std::vector<double> pot;
  std::vector<double> rmax;
  std::vector<std::size_t> idx;

  void clear() {
    pts.clear();
    pot.clear();
    rmax.clear();
    idx.clear();
  }
};

class BandLists {
 public:
  void reset(std::size_t bands) {
    bands_.resize(bands);
    for (auto& b : bands_) b.clear();
    top_ = kNegInf;
  }

  void push(std::size_t band, std::size_t i, const TimeSpacePoint& p, double potential) {
    Band& b = bands_[band];
    b.pts.push_back(p);
    b.pot.push_back(potential);
    b.rmax.push_back(b.rmax.empty() ? potential : std::max(b.rmax.back(), potential));
    b.idx.push_back(i);
    top_ = std::max(top_, potential);
  }

  // Visits bands by increasing distance from x. `lower_cost(d)` bounds the
  // step cost from any point at x-distance >= d; `hopeless(v)` says a
  // candidate of value at most v cannot help. visit(band, cost_floor) is
  // responsible for the scan inside a band.
  template <class LowerCost, class Hopeless, class Visit>
  void scan(const BandIndex& index, double x, LowerCost&& lower_cost, Hopeless&& hopeless,
            Visit&& visit) const {
    const std::size_t home = index.band_of(x);
    const std::size_t n = bands_.size();
    for (std::size_t r = 0; r < n; ++r) {
      const bool left = home >= r;
      const bool right = r > 0 && home + r < n;
      if (!left && !right) break;
      const double dl = left ? index.distance(x, home - r) : kInfinity;
      const double dr = right ? index.distance(x, home + r) : kInfinity;
      if (hopeless(top_ - lower_cost(std::min(dl, dr)))) break;
      if (left) visit_band(home - r, lower_cost(dl), hopeless, visit);
      if (right) visit_band(home + r, lower_cost(dr), hopeless, visit);
    }
  }

 private:
  template <class Hopeless, class Visit>
  void visit_band(std::size_t band, double floor, Hopeless& hopeless, Visit& visit) const {
    const Band& b = bands_[band];
    if (b.pot.empty() || hopeless(b.rmax.back() - floor)) return;
    visit(b, floor);
  }

  std::vector<Band> bands_;
  double top_ = kNegInf;
};

struct RelaxedPass {
  double opt = 0.0;          // max(0, max_j F_j)
  std::size_t count = 0;     // size of one maximizer
  double entropy = 0.0;      // its entropy
  std::vector<double> F;     // best relaxed value of a path ending at j
};

class BoundedSolver {
 public:
  BoundedSolver(std::span<const TimeSpacePoint> points, double budget) : budget_(budget) {
    // Points with x^2/2t > B cannot appear on any admissible path.
    std::vector<TimeSpacePoint> reach;
    for (const auto& p : points) {
      if (step_cost(kOrigin, p) <= budget) reach.push_back(p);
    }
    pts_ = canonical_order(reach);
    const std::size_t m = pts_.size();
    t_.resize(m);
    x_.resize(m);
    c0_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      t_[j] = pts_[j].t;
      x_[j] = pts_[j].x;
      c0_[j] = step_cost(kOrigin, pts_[j]);
    }
    t_end_ = m ? t_.back() : 0.0;
    bands_ = BandIndex(x_);
    band_of_.resize(m);
    for (std::size_t j = 0; j < m; ++j) band_of_[j] = bands_.band_of(x_[j]);
  }

  std::size_t solve(BoundedLppStats* stats) {
    const std::size_t m = pts_.size();
    if (m == 0) return 0;

    std::size_t lower = 0;
    std::size_t upper = m;
    double best_lambda = 0.0;
    RelaxedPass best_pass;

    auto consider = [&](double lambda, RelaxedPass&& pass) {
      if (pass.entropy <= budget_) lower = std::max(lower, pass.count);
      const double bound = (pass.opt + budget_) / lambda;
      const auto u = static_cast<std::size_t>(std::min(static_cast<double>(m),
                                                       std::floor(bound + slack(bound))));
      if (u < upper || best_lambda == 0.0) {
        if (u < upper) upper = u;
        best_lambda = lambda;
        best_pass = std::move(pass);
      }
    };

    // Bracket the budget: lo is feasible (entropy <= B), hi is not.
    struct Vertex {
      double lambda;
      std::size_t count;
      double entropy;
    };
    int evals = 0;
    auto eval = [&](double lambda) {
      ++evals;
      auto pass = relaxed_forward(lambda);
      const Vertex v{lambda, pass.count, pass.entropy};
      consider(lambda, std::move(pass));
      return v;
    };

    // Along the hull the maximizer's entropy grows roughly like lambda^(4/3);
    // steps follow that model.
    std::optional<Vertex> lo, hi;
    double lambda = 1.0;
    while (evals < 128 && lower < upper) {
      const Vertex v = eval(lambda);
      const double ratio = v.entropy > 0.0 ? std::pow(budget_ / v.entropy, 0.75) : 16.0;
      if (v.entropy <= budget_) {
        lo = v;
        if (v.count == m || hi) break;
        lambda *= std::clamp(ratio, 2.0, 1024.0);
      } else {
        hi = v;
        if (lo) break;
        lambda *= std::clamp(ratio, 1.0 / 1024.0, 0.5);
      }
    }

    // Walk the upper hull of (count, -entropy): the next multiplier is where
    // the two bracketing maximizers tie. No better maximizer there means the
    // bracket spans one hull edge and the dual bound cannot improve. A small
    // remaining gap is cheaper to close with the restricted frontier.
    auto gap_small = [&] { return upper - lower <= std::max<std::size_t>(2, lower / 20); };
    while (lo && hi && lower < upper && !gap_small() && evals < 128 &&
           hi->count > lo->count) {
      const double mid = (hi->entropy - lo->entropy) / static_cast<double>(hi->count - lo->count);
      if (!(mid > 0.0)) break;
      const Vertex v = eval(mid);
      const double line = mid * static_cast<double>(lo->count) - lo->entropy;
      const double got = mid * static_cast<double>(v.count) - v.entropy;
      if (got <= line + slack(line)) break;
      (v.entropy <= budget_ ? lo : hi) = v;
    }

    if (stats) {
      stats->relaxed_passes = static_cast<std::size_t>(evals);
      stats->lower_bound = lower;
      stats->upper_bound = upper;
      stats->used_frontier = lower < upper;
    }
    if (lower >= upper) return lower;

    const auto H = relaxed_backward(best_lambda);
    const std::size_t found = restricted_frontier(best_lambda, best_pass.F, H, lower + 1);
    return std::max(lower, found);
  }

 private:
  RelaxedPass relaxed_forward(double lambda) {
    const std::size_t m = pts_.size();
    RelaxedPass out;
    out.F.assign(m, kNegInf);
    std::vector<std::size_t> cnt(m, 0);
    std::vector<double> ent(m, 0.0);
    lists_.reset(bands_.count);

    for (std::size_t j = 0; j < m; ++j) {
      const TimeSpacePoint pj = pts_[j];
      double acc = -c0_[j];
      std::size_t arg = m;
      const double tj = t_[j];
      auto lower_cost = [tj](double d) { return tj > 0.0 ? 0.5 * d * d / tj : 0.0; };
      auto hopeless = [&acc](double v) { return v <= acc; };
      lists_.scan(bands_, x_[j], lower_cost, hopeless, [&](const Band& b, double floor) {
        for (std::size_t p = b.pot.size(); p-- > 0;) {
          if (b.rmax[p] - floor <= acc) break;
          const double v = b.pot[p] - step_cost(b.pts[p], pj);
          if (v > acc) {
            acc = v;
            arg = b.idx[p];
          }
        }
      });
      out.F[j] = lambda + acc;
      cnt[j] = arg == m ? 1 : cnt[arg] + 1;
      ent[j] = arg == m ? c0_[j] : ent[arg] + step_cost(pts_[arg], pj);
      lists_.push(band_of_[j], j, pj, out.F[j]);
    }

    for (std::size_t j = 0; j < m; ++j) {
      if (out.F[j] > out.opt) {
        out.opt = out.F[j];
        out.count = cnt[j];
        out.entropy = ent[j];
      }
    }
    return out;
  }

  // H[i] = best relaxed value of a continuation strictly after i (>= 0).
  std::vector<double> relaxed_backward(double lambda) {
    const std::size_t m = pts_.size();
    std::vector<double> H(m, 0.0);
    lists_.reset(bands_.count);
    for (std::size_t i = m; i-- > 0;) {
      const TimeSpacePoint pi = pts_[i];
      double acc = 0.0;
      const double horizon = t_end_ - t_[i];
      auto lower_cost = [horizon](double d) { return horizon > 0.0 ? 0.5 * d * d / horizon : 0.0; };
      auto hopeless = [&acc](double v) { return v <= acc; };
      lists_.scan(bands_, x_[i], lower_cost, hopeless, [&](const Band& b, double floor) {
        for (std::size_t p = b.pot.size(); p-- > 0;) {
          if (b.rmax[p] - floor <= acc) break;
          const double v = b.pot[p] - step_cost(pi, b.pts[p]);
          if (v > acc) acc = v;
        }
      });
      H[i] = acc;
      lists_.push(band_of_[i], i, pi, lambda + H[i]);
    }
    return H;
  }

  // Largest count reachable within budget among labels that can still
  // reach `target` points; 0 if none can.
  std::size_t restricted_frontier(double lambda, const std::vector<double>& F,
                                  const std::vector<double>& H, std::size_t target) {
    const std::size_t m = pts_.size();
    const double goal = lambda * static_cast<double>(target) - budget_;

    struct Row {
      std::size_t k_lo = 0;  // count of values[0]
      std::vector<double> values;
    };
    std::vector<Row> rows(m);
    lists_.reset(bands_.count);
    std::vector<double> cur;
    std::size_t best = 0;

    auto keep = [&](std::size_t j, std::size_t k, double e) {
      if (!(e <= budget_)) return false;
      const double room = (H[j] + budget_ - e) / lambda;
      return static_cast<double>(k) + room + slack(room) >= static_cast<double>(target);
    };

    for (std::size_t j = 0; j < m; ++j) {
      // j must lie on some path whose relaxed value reaches the goal.
      if (F[j] + H[j] + slack(goal) < goal) continue;
      const TimeSpacePoint pj = pts_[j];
      const double need = goal - lambda - H[j];
      const double tol = slack(need);

      std::size_t k_lo = 1;
      cur.assign(1, c0_[j]);
      const double tj = t_[j];
      auto lower_cost = [tj](double d) { return tj > 0.0 ? 0.5 * d * d / tj : 0.0; };
      auto hopeless = [need, tol](double v) { return v + tol < need; };
      lists_.scan(bands_, x_[j], lower_cost, hopeless, [&](const Band& b, double floor) {
        for (std::size_t p = b.pot.size(); p-- > 0;) {
          if (b.rmax[p] - floor + tol < need) break;
          const double c = step_cost(b.pts[p], pj);
          if (b.pot[p] - c + tol < need) continue;
          const Row& ri = rows[b.idx[p]];
          const std::size_t first = ri.k_lo + 1;
          const std::size_t last = ri.k_lo + ri.values.size();  // exclusive upper count
          if (first < k_lo) {
            cur.insert(cur.begin(), k_lo - first, kInfinity);
            k_lo = first;
          }
          if (last + 1 > k_lo + cur.size()) cur.resize(last + 1 - k_lo, kInfinity);
          double* out = cur.data() + (first - k_lo);
          for (std::size_t q = 0; q < ri.values.size(); ++q) {
            const double v = ri.values[q] + c;
            out[q] = v < out[q] ? v : out[q];
          }
        }
      });

      // Drop labels that cannot reach the target; trim the ends of the window.
      for (std::size_t q = 0; q < cur.size(); ++q) {
        if (!keep(j, k_lo + q, cur[q])) cur[q] = kInfinity;
      }
      std::size_t a = 0, z = cur.size();
      while (a < z && !std::isfinite(cur[a])) ++a;
      while (z > a && !std::isfinite(cur[z - 1])) --z;
      if (a == z) continue;
      Row& row = rows[j];
      row.k_lo = k_lo + a;
      row.values.assign(cur.begin() + static_cast<std::ptrdiff_t>(a),
                        cur.begin() + static_cast<std::ptrdiff_t>(z));
      best = std::max(best, row.k_lo + row.values.size() - 1);
      lists_.push(band_of_[j], j, pj, F[j]);
    }
    return best;
  }

  double budget_;
  std::vector<TimeSpacePoint> pts_;
  std::vector<double> t_, x_, c0_;
  double t_end_ = 0.0;
  BandIndex bands_;
  std::vector<std::size_t> band_of_;
  BandLists lists_;
};

}  // namespace

std::size_t elpp_count(std::span<const TimeSpacePoint> points, double budget,
                       LppAlgorithm algorithm, BoundedLppStats* stats) {
  if (!(budget >= 0.0)) throw ContractViolation("entropy budget must be >= 0");
  if (algorithm == LppAlgorithm::Frontier) {
    return build_frontier(points, FrontierOptions{budget, 0}).max_count();
  }
  BoundedSolver solver(points, budget);
  return solver.solve(stats);
}

}  // namespace elpp
