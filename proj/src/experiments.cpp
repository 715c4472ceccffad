#include "elpp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "elpp/environment.hpp"
#include "elpp/lpp_solver.hpp"
#include "elpp/variational.hpp"

namespace elpp {
namespace {

template <class Fn>
std::vector<ExperimentRecord> run_replicas(std::size_t count, std::size_t threads, Fn&& fn) {
  std::vector<ExperimentRecord> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= count) return;
      try {
        out[r] = fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

ExperimentRecord make_record(const std::string& name, std::size_t replica, const json& params,
                             const SeedSpec& seed, json outputs) {
  ExperimentRecord rec;
  rec.experiment = name;
  rec.replica = replica;
  rec.params = params;
  rec.seed = seed;
  rec.outputs = std::move(outputs);
  return rec;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> column(const std::vector<ExperimentRecord>& records, const json::json_pointer& ptr) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.outputs.contains(ptr)) out.push_back(r.outputs.at(ptr).get<double>());
  }
  return out;
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

void require(bool ok, const char* what) {
  if (!ok) throw ContractViolation(what);
}

// ---- tail --------------------------------------------------------------

void summarize_tail(ExperimentResult& res) {
  const auto& p = res.params;
  const auto L = column(res.records, json::json_pointer("/L"));
  const auto ratio = column(res.records, json::json_pointer("/ratio"));
  res.stats.push_back({"L", summarize(L)});
  res.stats.push_back({"ratio", summarize(ratio)});

  const auto max_l = static_cast<std::size_t>(*std::max_element(L.begin(), L.end()));
  std::vector<std::size_t> at_least(max_l + 2, 0);
  for (double v : L) ++at_least[static_cast<std::size_t>(v)];
  for (std::size_t k = max_l; k-- > 0;) at_least[k] += at_least[k + 1];
  const double n = static_cast<double>(L.size());
  json tail = json::array(), tail_se = json::array();
  std::vector<double> surv(at_least.size());
  for (std::size_t k = 0; k < at_least.size(); ++k) {
    surv[k] = static_cast<double>(at_least[k]) / n;
    tail.push_back(surv[k]);
    tail_se.push_back(std::sqrt(surv[k] * (1.0 - surv[k]) / n));
  }

  // Hazard ratios S(k+1)/S(k); the onset is the first k from which they
  // never increase again.
  std::vector<double> hazard;
  for (std::size_t k = 0; k + 1 < surv.size() && surv[k] > 0.0; ++k) {
    hazard.push_back(surv[k + 1] / surv[k]);
  }
  std::size_t onset = hazard.size();
  while (onset > 0 && (onset == hazard.size() || hazard[onset - 1] >= hazard[onset])) --onset;

  double b1 = 0.0, b2 = 0.0;
  for (double r : ratio) {
    b1 += r;
    b2 += r * r;
  }
  const bool lattice = p.at("mode") == "lattice";
  const double t = lattice ? p.at("n").get<double>() : p.at("t").get<double>();
  const double x = lattice ? p.at("h").get<double>() : p.at("x").get<double>();
  const double B = p.at("B").get<double>();
  res.summary = json{{"scale", lpp_scale(B, t, x, p.at("m").get<std::size_t>())},
                     {"tail_at_least", tail},
                     {"tail_stderr", tail_se},
                     {"super_geometric_from", onset},
                     {"predicted_onset", std::pow(B * t / (x * x), 0.25) *
                                             std::sqrt(p.at("m").get<double>())},
                     {"mean_ratio_b1", b1 / n},
                     {"mean_ratio_b2", b2 / n}};
}

// ---- scaling -----------------------------------------------------------

std::string beta_key(double beta) { return "T_beta=" + fmt_g(beta); }

void summarize_scaling(ExperimentResult& res) {
  const auto& p = res.params;
  const double alpha = p.at("alpha").get<double>();
  const double exponent = 2.0 * alpha / (2.0 * alpha - 1.0);
  std::vector<double> ref;
  for (const auto& r : res.records) {
    if (r.outputs.at("sample") == "reference") ref.push_back(r.outputs.at("T").get<double>());
  }
  json ks = json::array();
  for (double beta : p.at("betas").get<std::vector<double>>()) {
    std::vector<double> sample;
    for (const auto& r : res.records) {
      if (r.outputs.at("sample") == "beta") sample.push_back(r.outputs.at(beta_key(beta)).get<double>());
    }
    const double factor = std::pow(beta, exponent);
    std::vector<double> scaled(ref);
    for (double& v : scaled) v *= factor;
    SummaryStats s = summarize(sample);
    s.ks_distance = ks_two_sample(sample, scaled);
    res.stats.push_back({beta_key(beta), s});
    ks.push_back({{"beta", beta}, {"factor", factor}, {"ks", *s.ks_distance}});
  }
  res.stats.push_back({"T_reference", summarize(ref)});
  res.summary = json{{"exponent", exponent},
                     {"ks", ks},
                     {"reference_tail_slope", tail_slope(ref, 0.01, 0.1)},
                     {"moment_slope_bound", -(alpha - 0.5 - 0.1)}};
}

// ---- convergence -------------------------------------------------------

struct Rung {
  std::int64_t n, h, H;
  double beta;
};

std::vector<Rung> ladder(const json& p) {
  std::vector<Rung> out;
  const double gamma = p.at("gamma").get<double>();
  const double q = p.at("q").get<double>();
  for (auto n : p.at("ns").get<std::vector<std::int64_t>>()) {
    const auto h = std::max<std::int64_t>(1, std::llround(std::pow(static_cast<double>(n), gamma)));
    const auto H = std::max<std::int64_t>(1, std::llround(q * static_cast<double>(h)));
    out.push_back({n, h, H,
                   beta_nh(p.at("nu").get<double>(), n, h, p.at("alpha").get<double>())});
  }
  return out;
}

std::string rung_key(std::int64_t n) { return "n=" + std::to_string(n); }

void summarize_convergence(ExperimentResult& res) {
  const auto cont = column(res.records, json::json_pointer("/continuum"));
  res.stats.push_back({"continuum", summarize(cont)});
  json rungs = json::array();
  std::vector<double> dists;
  for (const auto& r : ladder(res.params)) {
    const auto v = column(res.records, json::json_pointer("/" + rung_key(r.n)));
    SummaryStats s = summarize(v);
    s.ks_distance = ks_two_sample(v, cont);
    dists.push_back(*s.ks_distance);
    res.stats.push_back({rung_key(r.n), s});
    rungs.push_back({{"n", r.n}, {"h", r.h}, {"H", r.H}, {"beta", r.beta}, {"ks", *s.ks_distance}});
  }
  res.summary = json{{"rungs", rungs}, {"ks_nonincreasing", nonincreasing(dists)}};
}

// ---- truncation --------------------------------------------------------

double truncation_beta(const json& p) {
  if (p.contains("beta") && !p.at("beta").is_null()) return p.at("beta").get<double>();
  return beta_nh(p.at("nu").get<double>(), p.at("n").get<std::int64_t>(),
                 p.at("h").get<std::int64_t>(), p.at("alpha").get<double>());
}

double truncation_scale(double beta, std::int64_t n, std::int64_t h, double alpha, std::size_t ell) {
  const double nd = static_cast<double>(n), hd = static_cast<double>(h);
  const double l = static_cast<double>(ell);
  return std::pow(beta * m_of(nd * hd / l, alpha), 4.0 / 3.0) * std::cbrt(l * l * nd / (hd * hd));
}

void summarize_truncation(ExperimentResult& res) {
  const auto& p = res.params;
  json med_raw = json::array(), med_scaled = json::array(), med_inc = json::array();
  std::vector<double> raw_m, inc_m;
  bool inc_nonneg = true;
  for (auto ell : p.at("ells").get<std::vector<std::size_t>>()) {
    const std::string e = std::to_string(ell);
    const auto raw = column(res.records, json::json_pointer("/tail/" + e));
    const auto scaled = column(res.records, json::json_pointer("/tail_scaled/" + e));
    const auto inc = column(res.records, json::json_pointer("/increment/" + e));
    for (double v : inc) inc_nonneg = inc_nonneg && v >= 0.0;
    res.stats.push_back({"tail ell=" + e, summarize(raw)});
    res.stats.push_back({"tail_scaled ell=" + e, summarize(scaled)});
    res.stats.push_back({"increment ell=" + e, summarize(inc)});
    raw_m.push_back(median(raw));
    inc_m.push_back(median(inc));
    med_raw.push_back(raw_m.back());
    med_scaled.push_back(median(scaled));
    med_inc.push_back(inc_m.back());
  }
  res.summary = json{{"beta", truncation_beta(p)},
                     {"median_tail", med_raw},
                     {"median_tail_scaled", med_scaled},
                     {"median_increment", med_inc},
                     {"tail_median_nonincreasing", nonincreasing(raw_m)},
                     {"increment_median_nonincreasing", nonincreasing(inc_m)},
                     {"increments_nonnegative", inc_nonneg}};
}

// ---- blow-up -----------------------------------------------------------

std::size_t blowup_ell(double ell0, double q) {
  return static_cast<std::size_t>(std::ceil(ell0 * q));
}

std::string blowup_key(const char* which, double q) { return std::string(which) + "/q=" + fmt_g(q); }

void summarize_blowup(ExperimentResult& res) {
  const auto& p = res.params;
  const auto qs = p.at("qs").get<std::vector<double>>();
  auto series = [&](const char* which, double alpha) {
    json medians = json::array(), ratios = json::array();
    std::vector<double> med;
    for (double q : qs) {
      const auto v = column(res.records, json::json_pointer("/" + blowup_key(which, q)));
      res.stats.push_back({"alpha=" + fmt_g(alpha) + " q=" + fmt_g(q), summarize(v)});
      med.push_back(median(v));
      medians.push_back(med.back());
    }
    std::vector<double> r;
    for (std::size_t i = 1; i < med.size(); ++i) {
      r.push_back(med[i - 1] > 0.0 ? med[i] / med[i - 1] : kInfinity);
      ratios.push_back(r.back());
    }
    return std::pair{json{{"alpha", alpha}, {"medians", medians}, {"ratios", ratios}}, r};
  };
  auto [main, r] = series("main", p.at("alpha").get<double>());
  main["diverges"] = !r.empty() && std::all_of(r.begin(), r.end(), [](double v) { return v >= 1.5; });
  res.summary = json{{"main", main}};
  if (p.contains("control_alpha") && !p.at("control_alpha").is_null()) {
    auto [ctl, cr] = series("control", p.at("control_alpha").get<double>());
    ctl["stable"] = !cr.empty() && cr.back() >= 0.8 && cr.back() <= 1.25;
    res.summary["control"] = ctl;
  }
}

}  // namespace

double beta_nh(double nu, std::int64_t n, std::int64_t h, double alpha) {
  if (n < 1 || h < 1) throw ContractViolation("beta_nh: need n, h >= 1");
  const double nd = static_cast<double>(n), hd = static_cast<double>(h);
  return nu * hd * hd / (nd * m_of(nd * hd, alpha));
}

double lpp_scale(double B, double t, double x, std::size_t m) {
  const double md = static_cast<double>(m);
  return std::min(std::pow(B * t / (x * x), 0.25) * std::sqrt(md), md);
}

json to_json(const TailParams& p) {
  json j{{"mode", p.mode}, {"m", p.m}, {"B", p.B}, {"replicas", p.replicas}};
  if (p.mode == "lattice") {
    j["n"] = p.n;
    j["h"] = p.h;
  } else {
    j["t"] = p.t;
    j["x"] = p.x;
  }
  return j;
}

json to_json(const ScalingParams& p) {
  return json{{"alpha", p.alpha},
              {"betas", p.betas},
              {"ell", p.ell},
              {"q", p.q},
              {"replicas", p.replicas},
              {"reference_offset", p.reference_offset.value_or(p.replicas)}};
}

json to_json(const ConvergenceParams& p) {
  return json{{"alpha", p.alpha}, {"nu", p.nu},     {"q", p.q},
              {"ell", p.ell},     {"ns", p.ns},     {"gamma", p.gamma},
              {"replicas", p.replicas}};
}

json to_json(const TruncationParams& p) {
  const std::size_t max_ell = p.ells.empty() ? 0 : *std::max_element(p.ells.begin(), p.ells.end());
  json j{{"alpha", p.alpha}, {"nu", p.nu},     {"n", p.n},
         {"h", p.h},         {"q", p.q},       {"ells", p.ells},
         {"retain", p.retain ? p.retain : 8 * max_ell},
         {"replicas", p.replicas}};
  j["beta"] = p.beta ? json(*p.beta) : json(nullptr);
  return j;
}

json to_json(const BlowupParams& p) {
  json j{{"alpha", p.alpha}, {"nu", p.nu}, {"qs", p.qs}, {"ell0", p.ell0}, {"replicas", p.replicas}};
  j["control_alpha"] = p.control_alpha ? json(*p.control_alpha) : json(nullptr);
  return j;
}

ExperimentResult run_tail(const TailParams& p, const RunOptions& opt) {
  require(p.replicas >= 1000, "tail: replicas must be >= 1000");
  require(p.m >= 1, "tail: m must be >= 1");
  require(p.B >= 0.0, "tail: B must be >= 0");
  const bool lattice = p.mode == "lattice";
  require(lattice || p.mode == "continuous", "tail: mode must be continuous or lattice");
  Box box;
  if (lattice) {
    require(p.n >= 1 && p.h >= 1, "tail: lattice mode needs n, h >= 1");
    box = Box::lattice(p.n, p.h);
    require(p.m <= box.lattice_sites(), "tail: m exceeds the lattice box");
  } else {
    require(p.t > 0.0 && p.x > 0.0, "tail: t and x must be > 0");
    box = Box::continuous(p.t, p.x);
  }
  const double scale = lattice ? lpp_scale(p.B, static_cast<double>(p.n), static_cast<double>(p.h), p.m)
                               : lpp_scale(p.B, p.t, p.x, p.m);

  ExperimentResult res;
  res.experiment = "tail";
  res.params = to_json(p);
  res.master_seed = opt.master_seed;
  res.records = run_replicas(p.replicas, opt.threads, [&](std::size_t r) {
    const SeedSpec seed{opt.master_seed, r};
    const Environment env =
        lattice ? sample_lattice_cloud(p.m, box, seed) : sample_uniform_cloud(p.m, box, seed);
    const auto L = elpp_count(env.locations(), p.B);
    return make_record(res.experiment, r, res.params, seed,
                       json{{"L", L}, {"ratio", static_cast<double>(L) / scale}});
  });
  summarize(res);
  return res;
}

ExperimentResult run_scaling(const ScalingParams& p, const RunOptions& opt) {
  require(p.alpha > 0.5 && p.alpha < 2.0, "scaling: alpha must lie in (1/2, 2)");
  require(p.ell >= 100, "scaling: ell must be >= 100");
  require(p.q >= 8.0, "scaling: q must be >= 8");
  require(p.replicas >= 2000, "scaling: replicas must be >= 2000");
  require(!p.betas.empty(), "scaling: need at least one beta");
  for (double b : p.betas) require(b >= 0.0, "scaling: betas must be >= 0");
  const std::uint64_t offset = p.reference_offset.value_or(p.replicas);

  ExperimentResult res;
  res.experiment = "scaling";
  res.params = to_json(p);
  res.master_seed = opt.master_seed;
  res.records = run_replicas(2 * p.replicas, opt.threads, [&](std::size_t i) {
    if (i < p.replicas) {
      const SeedSpec seed{opt.master_seed, i};
      const Environment env = sample_ppp_ordered(p.ell, p.alpha, p.q, seed);
      json out{{"sample", "beta"}};
      for (double b : p.betas) out[beta_key(b)] = solve_variational(env, b, p.ell).value;
      return make_record(res.experiment, i, res.params, seed, std::move(out));
    }
    const std::size_t r = i - p.replicas;
    const SeedSpec seed{opt.master_seed, offset + r};
    const double v = continuum_T_truncated(p.alpha, 1.0, p.q, p.ell, seed).value;
    return make_record(res.experiment, r, res.params, seed, json{{"sample", "reference"}, {"T", v}});
  });
  summarize(res);
  return res;
}

ExperimentResult run_convergence(const ConvergenceParams& p, const RunOptions& opt) {
  require(p.ns.size() >= 3, "convergence: ladder needs at least 3 rungs");
  require(std::is_sorted(p.ns.begin(), p.ns.end()), "convergence: ladder must be ascending");
  require(p.alpha > 0.0 && p.alpha < 2.0, "convergence: alpha must lie in (0, 2)");
  require(p.gamma > 0.5 && p.gamma < 1.0, "convergence: gamma must lie in (1/2, 1)");
  require(p.nu >= 0.0 && p.q > 0.0, "convergence: need nu >= 0, q > 0");
  require(p.ell >= 1, "convergence: ell must be >= 1");
  require(p.replicas >= 1, "convergence: replicas must be >= 1");

  ExperimentResult res;
  res.experiment = "convergence";
  res.params = to_json(p);
  res.master_seed = opt.master_seed;
  const auto rungs = ladder(res.params);
  for (const auto& r : rungs) {
    require(r.n >= 1, "convergence: n must be >= 1");
    require(p.ell <= Box::lattice(r.n, r.H).lattice_sites(), "convergence: ell exceeds the lattice");
  }
  res.records = run_replicas(p.replicas, opt.threads, [&](std::size_t r) {
    const SeedSpec seed{opt.master_seed, r};
    json out{{"continuum", continuum_T_truncated(p.alpha, p.nu, p.q, p.ell, seed).value}};
    for (const auto& g : rungs) {
      const Environment env = sample_lattice_field(Box::lattice(g.n, g.H), p.alpha, seed, p.ell);
      const double v = solve_variational(env, g.beta, p.ell).value;
      out[rung_key(g.n)] = static_cast<double>(g.n) / static_cast<double>(g.h * g.h) * v;
    }
    return make_record(res.experiment, r, res.params, seed, std::move(out));
  });
  summarize(res);
  return res;
}

ExperimentResult run_truncation(const TruncationParams& p, const RunOptions& opt) {
  require(!p.ells.empty(), "truncation: need at least one ell");
  require(std::adjacent_find(p.ells.begin(), p.ells.end(), std::greater_equal<>()) == p.ells.end(),
          "truncation: ells must be strictly ascending");
  require(p.ells.front() >= 1, "truncation: ells must be >= 1");
  require(p.alpha > 0.0 && p.alpha < 2.0, "truncation: alpha must lie in (0, 2)");
  require(p.n >= 1 && p.h >= 1 && p.q > 0.0, "truncation: need n, h >= 1 and q > 0");
  require(p.replicas >= 1, "truncation: replicas must be >= 1");

  ExperimentResult res;
  res.experiment = "truncation";
  res.params = to_json(p);
  res.master_seed = opt.master_seed;
  const std::size_t retain = res.params.at("retain").get<std::size_t>();
  const double beta = truncation_beta(res.params);
  require(beta >= 0.0, "truncation: beta must be >= 0");
  const Box box = Box::lattice(p.n, p.h);
  require(retain <= box.lattice_sites(), "truncation: retain exceeds the lattice");
  const std::size_t cont_ell = 2 * p.ells.back();

  res.records = run_replicas(p.replicas, opt.threads, [&](std::size_t r) {
    const SeedSpec seed{opt.master_seed, r};
    const Environment field = sample_lattice_field(box, p.alpha, seed, retain);
    const Environment ppp = sample_ppp_ordered(cont_ell, p.alpha, p.q, seed);
    json tail, scaled, inc;
    for (std::size_t ell : p.ells) {
      const std::string e = std::to_string(ell);
      const double v = ell < field.size() ? solve_tail(field, beta, ell).value : 0.0;
      tail[e] = v;
      scaled[e] = v / truncation_scale(beta, p.n, p.h, p.alpha, ell);
      inc[e] = solve_variational(ppp, p.nu, 2 * ell).value - solve_variational(ppp, p.nu, ell).value;
    }
    return make_record(res.experiment, r, res.params, seed,
                       json{{"tail", tail}, {"tail_scaled", scaled}, {"increment", inc}});
  });
  summarize(res);
  return res;
}

ExperimentResult run_blowup(const BlowupParams& p, const RunOptions& opt) {
  require(p.alpha > 0.0 && p.alpha <= 0.5, "blowup: alpha must lie in (0, 1/2]");
  require(!p.qs.empty() && std::is_sorted(p.qs.begin(), p.qs.end()) && p.qs.front() > 0.0,
          "blowup: q ladder must be positive and ascending");
  require(p.ell0 > 0.0 && p.nu >= 0.0, "blowup: need ell0 > 0, nu >= 0");
  require(p.replicas >= 1, "blowup: replicas must be >= 1");
  if (p.control_alpha) {
    require(*p.control_alpha > 0.0 && *p.control_alpha < 2.0, "blowup: control alpha must lie in (0, 2)");
  }

  ExperimentResult res;
  res.experiment = "blowup";
  res.params = to_json(p);
  res.master_seed = opt.master_seed;
  res.records = run_replicas(p.replicas, opt.threads, [&](std::size_t r) {
    const SeedSpec seed{opt.master_seed, r};
    json out;
    for (double q : p.qs) {
      const std::size_t ell = blowup_ell(p.ell0, q);
      out[json::json_pointer("/" + blowup_key("main", q))] =
          continuum_T_truncated(p.alpha, p.nu, q, ell, seed).value;
      if (p.control_alpha) {
        out[json::json_pointer("/" + blowup_key("control", q))] =
            continuum_T_truncated(*p.control_alpha, p.nu, q, ell, seed).value;
      }
    }
    return make_record(res.experiment, r, res.params, seed, std::move(out));
  });
  summarize(res);
  return res;
}

void summarize(ExperimentResult& result) {
  result.stats.clear();
  result.summary = json::object();
  if (result.records.empty()) throw ContractViolation("summarize: no records");
  const auto& e = result.experiment;
  if (e == "tail") {
    summarize_tail(result);
  } else if (e == "scaling") {
    summarize_scaling(result);
  } else if (e == "convergence") {
    summarize_convergence(result);
  } else if (e == "truncation") {
    summarize_truncation(result);
  } else if (e == "blowup") {
    summarize_blowup(result);
  } else {
    throw ContractViolation("summarize: unknown experiment '" + e + "'");
  }
}

double tail_slope(std::vector<double> sample, double p_lo, double p_hi) {
  if (!(p_lo > 0.0 && p_lo < p_hi && p_hi <= 1.0)) {
    throw ContractViolation("tail_slope: need 0 < p_lo < p_hi <= 1");
  }
  std::sort(sample.begin(), sample.end(), std::greater<>());
  const double n = static_cast<double>(sample.size());
  std::vector<double> lx, lp;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    // i+1 observations are >= sample[i].
    const double surv = static_cast<double>(i + 1) / n;
    if (surv < p_lo || surv > p_hi || !(sample[i] > 0.0)) continue;
    lx.push_back(std::log(sample[i]));
    lp.push_back(std::log(surv));
  }
  return ls_slope(lx, lp);
}

}  // namespace elpp
