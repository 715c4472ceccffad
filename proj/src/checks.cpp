#include "elpp/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "elpp/environment.hpp"
#include "elpp/experiments.hpp"
#include "elpp/io.hpp"
#include "elpp/lpp_solver.hpp"
#include "elpp/variational.hpp"
#include "elpp/volume.hpp"

namespace elpp {
namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

template <class Body>
CheckResult timed(int id, std::string name, double limit, Body&& body) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  r.time_limit = limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.passed = body(r.detail);
  } catch (const std::exception& ex) {
    r.passed = false;
    r.detail += std::string(" exception: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0.0 && r.seconds >= limit) {
    r.passed = false;
    r.detail += fmt(" runtime %.1fs exceeds %.0fs", r.seconds, limit);
  }
  return r;
}

// Exhaustive maximum of beta * energy - Ent over all subsets of the entries,
// with every subset whose value lies within tol of the maximum.
struct Exhaustive {
  double best = 0.0;
  std::vector<std::vector<std::size_t>> near_best;
};

Exhaustive exhaustive_variational(const Environment& env, double beta, double tol) {
  const std::size_t n = env.size();
  std::vector<std::pair<double, std::vector<std::size_t>>> all;
  all.push_back({0.0, {}});
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) ids.push_back(i);
    }
    std::vector<TimeSpacePoint> pts;
    double energy = 0.0;
    for (std::size_t i : ids) {
      pts.push_back(env.entries[i].location);
      energy += env.entries[i].weight;
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
      return a.t < b.t || (a.t == b.t && a.x < b.x);
    });
    const double ent = entropy(pts);
    if (std::isfinite(ent)) all.push_back({beta * energy - ent, ids});
  }
  Exhaustive ex;
  for (const auto& [v, ids] : all) ex.best = std::max(ex.best, v);
  for (const auto& [v, ids] : all) {
    if (v >= ex.best - tol) ex.near_best.push_back(ids);
  }
  return ex;
}

}  // namespace

CheckResult check_volume_anchor(const CheckOptions&) {
  return timed(1, "volume anchor", 30.0, [](std::string& d) {
    bool ok = true;
    const double anchor = 4.0 * std::sqrt(2.0) / 3.0;
    const double exact1 = volume_exact(1, 1.0, 1.0);
    ok = ok && std::abs(exact1 - anchor) < 1e-12;
    d += fmt("exact(k=1)=%.9f anchor=%.9f;", exact1, anchor);
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto v = volume_mc(k, 1.0, 1.0, 1000000, SeedSpec{101, k});
      const double target = k == 1 ? anchor : v.exact;
      const double z = std::abs(v.mc_mean - target) / v.mc_stderr;
      ok = ok && z <= 3.0;
      d += fmt(" k=%zu mc=%.6f exact=%.6f se=%.2e |z|=%.2f;", k, v.mc_mean, target, v.mc_stderr, z);
    }
    return ok;
  });
}

CheckResult check_elpp_oracle(const CheckOptions&) {
  return timed(2, "E-LPP oracle equivalence", 60.0, [](std::string& d) {
    std::size_t compared = 0, mismatches = 0, bad_witness = 0;
    for (int mode = 0; mode < 2; ++mode) {
      for (std::uint64_t s = 0; s < 1000; ++s) {
        const SeedSpec seed{202 + static_cast<std::uint64_t>(mode), s};
        const Environment env = mode == 0 ? sample_uniform_cloud(12, Box::continuous(1, 1), seed)
                                          : sample_lattice_cloud(12, Box::lattice(6, 3), seed);
        for (double B : {0.1, 1.0, 10.0}) {
          const auto res = elpp_value(env, B);
          const std::size_t oracle = brute_force_elpp(env, B);
          const std::size_t bounded = elpp_count(env.locations(), B, LppAlgorithm::Bounded);
          ++compared;
          if (res.value != oracle || bounded != oracle) ++mismatches;
          if (res.witness.size() != res.value || !(res.witness.entropy <= B)) ++bad_witness;
        }
      }
    }
    d = fmt("%zu comparisons, %zu mismatches, %zu invalid witnesses", compared, mismatches,
            bad_witness);
    return mismatches == 0 && bad_witness == 0;
  });
}

CheckResult check_variational_oracle(const CheckOptions&) {
  return timed(3, "variational oracle equivalence", 60.0, [](std::string& d) {
    std::size_t compared = 0, value_fail = 0, argmax_fail = 0;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const Environment env = sample_ppp_ordered(10, 1.0, 2.0, SeedSpec{303, s});
      for (double beta : {0.5, 2.0, 8.0}) {
        const auto dp = solve_variational(env, beta, 10);
        const auto ex = exhaustive_variational(env, beta, 1e-9);
        ++compared;
        const double err = std::abs(dp.value - ex.best);
        worst = std::max(worst, err);
        if (err > 1e-9) ++value_fail;
        auto ids = dp.argmax_entries;
        std::sort(ids.begin(), ids.end());
        if (std::find(ex.near_best.begin(), ex.near_best.end(), ids) == ex.near_best.end()) {
          ++argmax_fail;
        }
      }
    }
    d = fmt("%zu comparisons, %zu value mismatches (worst %.2e), %zu argmax mismatches", compared,
            value_fail, worst, argmax_fail);
    return value_fail == 0 && argmax_fail == 0;
  });
}

CheckResult check_duality(const CheckOptions&) {
  return timed(4, "duality", 0.0, [](std::string& d) {
    std::vector<double> budgets;
    for (int i = 0; i < 20; ++i) budgets.push_back(std::pow(10.0, -2.0 + 4.0 * i / 19.0));
    std::size_t cells = 0, violations = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Environment env = sample_uniform_cloud(20, Box::continuous(1, 1), SeedSpec{404, s});
      std::vector<double> min_ent(21);
      for (std::size_t k = 1; k <= 20; ++k) min_ent[k] = min_entropy_for_count(env, k);
      for (double B : budgets) {
        const std::size_t value = elpp_value(env, B).value;
        for (std::size_t k = 1; k <= 20; ++k) {
          ++cells;
          if ((min_ent[k] <= B) != (value >= k)) ++violations;
        }
      }
    }
    d = fmt("%zu (k,B) cells, %zu violations", cells, violations);
    return violations == 0;
  });
}

CheckResult check_scale_law(const CheckOptions& opt) {
  return timed(5, "scale-law stability", 600.0, [&](std::string& d) {
    std::vector<double> means;
    for (std::size_t m : {100u, 1000u, 10000u}) {
      TailParams p;
      p.m = m;
      p.replicas = 10000;
      const auto res = run_tail(p, RunOptions{505, opt.threads});
      means.push_back(res.summary.at("mean_ratio_b1").get<double>());
      d += fmt("m=%zu mean ratio %.4f; ", m, means.back());
    }
    const double spread = *std::max_element(means.begin(), means.end()) /
                          *std::min_element(means.begin(), means.end());
    d += fmt("max/min %.3f (need < 3)", spread);
    return spread < 3.0;
  });
}

CheckResult check_scaling_relation(const CheckOptions& opt) {
  return timed(6, "scaling relation", 600.0, [&](std::string& d) {
    ScalingParams p;
    p.alpha = 1.0;
    p.betas = {1.0, 2.0};
    p.ell = 200;
    p.q = 16.0;
    p.replicas = 2000;
    const auto res = run_scaling(p, RunOptions{606, opt.threads});
    const double control = res.summary.at("ks").at(0).at("ks").get<double>();
    const double ks = res.summary.at("ks").at(1).at("ks").get<double>();
    d = fmt("KS(beta=2 vs 2^2 T_1)=%.4f, identity control KS=%.4f, threshold %.4f", ks, control,
            2.0 * control);

    // Diagnostic only: rescaling x by b = 2 maps the beta = 2 problem on
    // [-q,q] onto 4 T_1 on [-q/2,q/2], so this comparison has no truncation
    // mismatch. It does not enter the verdict.
    std::vector<double> beta2, moved;
    for (const auto& r : res.records) {
      if (r.outputs.at("sample") == "beta") beta2.push_back(r.outputs.at("T_beta=2").get<double>());
    }
    for (std::uint64_t r = 0; r < p.replicas; ++r) {
      const SeedSpec seed{606, 2 * p.replicas + r};
      moved.push_back(4.0 * continuum_T_truncated(p.alpha, 1.0, p.q / 2.0, p.ell, seed).value);
    }
    d += fmt("; same comparison with T_1 on the rescaled strip q/2: KS=%.4f",
             ks_two_sample(beta2, moved));
    return ks < 2.0 * control;
  });
}

CheckResult check_tail_exponent(const CheckOptions& opt) {
  return timed(7, "tail exponent", 0.0, [&](std::string& d) {
    // The reference sample of a beta = 1 scaling run is 5000 draws of T_1.
    ScalingParams p;
    p.alpha = 1.0;
    p.betas = {1.0};
    p.ell = 200;
    p.q = 16.0;
    p.replicas = 5000;
    const auto res = run_scaling(p, RunOptions{707, opt.threads});
    const double slope = res.summary.at("reference_tail_slope").get<double>();
    d = fmt("slope of log P(T > s) over survival [0.01, 0.1]: %.4f (need <= -0.4)", slope);
    return slope <= -0.4;
  });
}

CheckResult check_convergence(const CheckOptions& opt) {
  return timed(8, "discrete to continuum", 1200.0, [&](std::string& d) {
    ConvergenceParams p;
    const auto res = run_convergence(p, RunOptions{808, opt.threads});
    for (const auto& r : res.summary.at("rungs")) {
      d += fmt("n=%lld h=%lld KS=%.4f; ", r.at("n").get<long long>(), r.at("h").get<long long>(),
               r.at("ks").get<double>());
    }
    const bool ok = res.summary.at("ks_nonincreasing").get<bool>();
    d += ok ? "nonincreasing" : "NOT nonincreasing";
    return ok;
  });
}

CheckResult check_blowup(const CheckOptions& opt) {
  return timed(9, "blow-up dichotomy", 0.0, [&](std::string& d) {
    BlowupParams p;
    const auto res = run_blowup(p, RunOptions{909, opt.threads});
    const auto& main = res.summary.at("main");
    const auto& ctl = res.summary.at("control");
    auto list = [](const json& a) {
      std::string s;
      for (const auto& v : a) s += fmt(" %.4g", v.get<double>());
      return s;
    };
    d = "alpha=0.4 medians" + list(main.at("medians")) + " ratios" + list(main.at("ratios")) +
        "; alpha=1 medians" + list(ctl.at("medians")) + " ratios" + list(ctl.at("ratios"));
    return main.at("diverges").get<bool>() && ctl.at("stable").get<bool>();
  });
}

CheckResult check_determinism(const CheckOptions&) {
  return timed(10, "determinism across thread counts", 0.0, [](std::string& d) {
    auto render = [](std::size_t threads) {
      const RunOptions opt{1010, threads};
      std::string out;
      TailParams tail;
      tail.m = 200;
      tail.replicas = 1000;
      ScalingParams sc;
      sc.ell = 100;
      sc.q = 8.0;
      ConvergenceParams cv;
      cv.ns = {16, 64, 256};
      cv.ell = 20;
      cv.replicas = 200;
      TruncationParams tr;
      tr.n = 64;
      tr.h = 16;
      tr.ells = {4, 8};
      tr.replicas = 200;
      BlowupParams bl;
      bl.qs = {1.0, 2.0, 4.0};
      bl.replicas = 200;
      for (const auto& res : {run_tail(tail, opt), run_scaling(sc, opt), run_convergence(cv, opt),
                              run_truncation(tr, opt), run_blowup(bl, opt)}) {
        out += records_jsonl(res) + summary_csv(res) + dump_json(summary_json(res));
      }
      return out;
    };
    const std::string one = render(1);
    const std::string eight = render(8);
    d = fmt("%zu bytes at 1 thread, %zu bytes at 8 threads, %s", one.size(), eight.size(),
            one == eight ? "identical" : "DIFFERENT");
    return one == eight;
  });
}

const std::vector<CheckEntry>& all_checks() {
  static const std::vector<CheckEntry> checks{
      {1, true, check_volume_anchor},       {2, true, check_elpp_oracle},
      {3, true, check_variational_oracle},  {4, true, check_duality},
      {5, false, check_scale_law},          {6, false, check_scaling_relation},
      {7, false, check_tail_exponent},      {8, false, check_convergence},
      {9, false, check_blowup},             {10, true, check_determinism},
  };
  return checks;
}

bool run_checks(const std::vector<int>& ids, const CheckOptions& opt,
                const std::function<void(const CheckResult&)>& report) {
  bool all_ok = true;
  for (const auto& c : all_checks()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    const CheckResult r = c.run(opt);
    all_ok = all_ok && r.passed;
    if (report) report(r);
  }
  return all_ok;
}

std::string format_check(const CheckResult& r) {
  return fmt("[%s] %d. %s (%.1fs): %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
             r.seconds, r.detail.c_str());
}

}  // namespace elpp
