#pragma once

// Replica-parallel Monte Carlo harnesses.
//
// Replica r always draws from stream (master_seed, r) (plus a fixed offset for
// auxiliary samples), records are kept in replica order, and every summary is
// a function of the records and parameters alone. Output therefore does not
// depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "elpp/core.hpp"
#include "elpp/rng.hpp"
#include "elpp/stats.hpp"

namespace elpp {

using json = nlohmann::json;

struct ExperimentRecord {
  std::string experiment;
  std::size_t replica = 0;
  json params;
  SeedSpec seed;
  json outputs;
  std::string generator_id = kGeneratorId;
};

struct NamedStats {
  std::string quantity;
  SummaryStats stats;
};

struct ExperimentResult {
  std::string experiment;
  json params;
  std::uint64_t master_seed = 0;
  std::vector<ExperimentRecord> records;
  /// One row per summarized quantity (the CSV summary).
  std::vector<NamedStats> stats;
  /// Experiment-specific aggregates and checks.
  json summary;
};

struct RunOptions {
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
};

/// E-LPP value law over random clouds. Continuous mode samples m uniform
/// points in [0,t] x [-x,x]; lattice mode samples m distinct sites of
/// [[1,n]] x [[-h,h]] (t = n, x = h in the scale formula).
struct TailParams {
  std::string mode = "continuous";
  std::size_t m = 100;
  double B = 1.0;
  double t = 1.0;
  double x = 1.0;
  std::int64_t n = 0;
  std::int64_t h = 0;
  std::size_t replicas = 1000;
};

/// Scaling relation T_beta = beta^{2a/(2a-1)} T_1 on truncated continuum
/// problems. The reference sample of T_1 uses streams reference_offset + r;
/// the default (replicas) makes it independent of the beta samples.
struct ScalingParams {
  double alpha = 1.0;
  std::vector<double> betas{1.0, 2.0};
  std::size_t ell = 200;
  double q = 16.0;
  std::size_t replicas = 2000;
  std::optional<std::uint64_t> reference_offset;
};

/// Lattice fields on [[1,n]] x [[-qh,qh]] with h = round(n^gamma) against the
/// continuum problem at nu. Replica r uses stream r for every rung and for the
/// continuum sample, which couples them through shared uniforms.
struct ConvergenceParams {
  double alpha = 1.0;
  double nu = 1.0;
  double q = 1.0;
  std::size_t ell = 50;
  std::vector<std::int64_t> ns{256, 1024, 4096};
  double gamma = 0.75;
  std::size_t replicas = 1000;
};

/// Tail energy beyond the ell heaviest weights of a lattice field, and the
/// continuum increments T^(2 ell) - T^(ell).
struct TruncationParams {
  double alpha = 1.0;
  double nu = 1.0;
  std::optional<double> beta;  // defaults to beta_nh(nu, n, h, alpha)
  std::int64_t n = 256;
  std::int64_t h = 64;
  double q = 1.0;
  std::vector<std::size_t> ells{8, 16, 32};
  std::size_t retain = 0;  // 0 = 8 * max(ells)
  std::size_t replicas = 1000;
};

/// Truncated continuum value along growing q with ell = ceil(ell0 q).
/// For the control alpha = 1, T_nu(q) is close in law to nu^2 T_1(q / nu),
/// so a small nu places the q ladder where the truncated value has settled.
struct BlowupParams {
  double alpha = 0.4;
  double nu = 0.25;
  std::vector<double> qs{2.0, 8.0, 32.0};
  double ell0 = 8.0;
  std::size_t replicas = 1000;
  std::optional<double> control_alpha = 1.0;
};

/// beta_{n,h} solving (n/h^2) beta m(nh) = nu for the pure Pareto law.
double beta_nh(double nu, std::int64_t n, std::int64_t h, double alpha);

/// min((B t / x^2)^{1/4} sqrt(m), m).
double lpp_scale(double B, double t, double x, std::size_t m);

json to_json(const TailParams& p);
json to_json(const ScalingParams& p);
json to_json(const ConvergenceParams& p);
json to_json(const TruncationParams& p);
json to_json(const BlowupParams& p);

ExperimentResult run_tail(const TailParams& p, const RunOptions& opt);
ExperimentResult run_scaling(const ScalingParams& p, const RunOptions& opt);
ExperimentResult run_convergence(const ConvergenceParams& p, const RunOptions& opt);
ExperimentResult run_truncation(const TruncationParams& p, const RunOptions& opt);
ExperimentResult run_blowup(const BlowupParams& p, const RunOptions& opt);

/// Rebuilds stats and summary from the records and params of `result`.
void summarize(ExperimentResult& result);

/// Empirical upper-tail slope: least-squares slope of log P(X > x) against
/// log x at the order statistics whose survival lies in [p_lo, p_hi].
double tail_slope(std::vector<double> sample, double p_lo, double p_hi);

}  // namespace elpp
