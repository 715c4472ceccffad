#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace elpp {

/// Streaming mean/variance (Welford) with Chan's pairwise merge.
struct PooledMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  void merge(const PooledMoments& other) noexcept;
  /// Unbiased sample variance; 0 for fewer than two observations.
  double variance() const noexcept;
};

struct SummaryStats {
  static constexpr std::array<double, 7> kLevels{0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99};

  std::size_t n_replicas = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::array<double, 7> quantiles{};  // at kLevels, nearest-rank rule
  std::optional<double> ks_distance;

  double median() const noexcept { return quantiles[3]; }
};

/// Nearest-rank quantile of a sorted sample: element ceil(p n) (1-based).
double quantile_nearest_rank(std::span<const double> sorted, double p);

SummaryStats summarize(std::span<const double> sample);

double median(std::span<const double> sample);

/// Sup distance between the two empirical CDFs, evaluated exactly at every
/// point of the merged support. Both samples must be nonempty.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS distance against a continuous CDF.
template <class Cdf>
double ks_one_sample(std::vector<double> sample, Cdf&& cdf);

/// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

}  // namespace elpp

#include <algorithm>
#include <cmath>
#include <stdexcept>

template <class Cdf>
double elpp::ks_one_sample(std::vector<double> sample, Cdf&& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}
