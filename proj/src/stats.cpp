#include "elpp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "elpp/core.hpp"

namespace elpp {

void PooledMoments::add(double x) noexcept {
  ++n;
  const double delta = x - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (x - mean);
}

void PooledMoments::merge(const PooledMoments& other) noexcept {
  if (other.n == 0) return;
  if (n == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(other.n);
  const double delta = other.mean - mean;
  const double total = na + nb;
  mean += delta * nb / total;
  m2 += other.m2 + delta * delta * na * nb / total;
  n += other.n;
}

double PooledMoments::variance() const noexcept {
  return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
}

double quantile_nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ContractViolation("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("quantile level must lie in [0,1]");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

SummaryStats summarize(std::span<const double> sample) {
  if (sample.empty()) throw ContractViolation("summarize: empty sample");
  SummaryStats s;
  PooledMoments pm;
  for (double x : sample) pm.add(x);
  s.n_replicas = sample.size();
  s.mean = pm.mean;
  s.variance = pm.variance();
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < SummaryStats::kLevels.size(); ++i) {
    s.quantiles[i] = quantile_nearest_rank(sorted, SummaryStats::kLevels[i]);
  }
  return s;
}

double median(std::span<const double> sample) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_nearest_rank(sorted, 0.5);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ContractViolation("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    // Step past every copy of the smallest remaining value in both samples.
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractViolation("ls_slope: need >= 2 pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ContractViolation("ls_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace elpp
