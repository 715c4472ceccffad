#include "elpp/volume.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "elpp/core.hpp"

namespace elpp {
namespace {

void check_body(std::size_t k, double t, double B) {
  if (k == 0) throw ContractViolation("entropy body dimension k must be >= 1");
  if (!(t > 0.0) || !(B > 0.0)) throw ContractViolation("t and B must be positive");
}

double log_factorial(std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// Depth-first enumeration; acc is the entropy accumulated so far.
std::uint64_t count_rec(std::size_t remaining, std::int64_t t_prev, double x_prev, double acc,
                        double budget, std::int64_t n) {
  if (remaining == 0) return 1;
  std::uint64_t total = 0;
  for (std::int64_t t = t_prev + 1; t <= n; ++t) {
    const double dt = static_cast<double>(t - t_prev);
    const auto reach = static_cast<std::int64_t>(std::floor(std::sqrt(2.0 * std::max(0.0, budget - acc) * dt))) + 1;
    const auto xp = static_cast<std::int64_t>(x_prev);
    for (std::int64_t x = xp - reach; x <= xp + reach; ++x) {
      const double c = step_cost({static_cast<double>(t_prev), x_prev},
                                 {static_cast<double>(t), static_cast<double>(x)});
      if (acc + c <= budget) {
        total += count_rec(remaining - 1, t, static_cast<double>(x), acc + c, budget, n);
      }
    }
  }
  return total;
}

}  // namespace

double log_entropy_body_constant(std::size_t k) {
  if (k == 0) throw ContractViolation("k must be >= 1");
  const double kd = static_cast<double>(k);
  return kd * std::log(std::numbers::pi) - 0.5 * kd * std::log(2.0) -
         std::lgamma(kd / 2.0 + 1.0) - std::lgamma(1.5 * kd + 1.0);
}

double volume_exact(std::size_t k, double t, double B) {
  check_body(k, t, B);
  const double kd = static_cast<double>(k);
  return std::exp(log_entropy_body_constant(k) + 0.5 * kd * std::log(B) + 1.5 * kd * std::log(t));
}

VolumeEstimate VolumeEstimate::merge(const VolumeEstimate& a, const VolumeEstimate& b) {
  if (a.k != b.k || a.t != b.t || a.B != b.B) {
    throw ContractViolation("can only merge estimates of the same body");
  }
  VolumeEstimate out = a;
  out.samples = a.samples + b.samples;
  out.hits = a.hits + b.hits;
  const double kd = static_cast<double>(a.k);
  const double cell = a.t * 2.0 * std::sqrt(2.0 * a.B * a.t);
  const double scale = std::exp(kd * std::log(cell) - log_factorial(a.k));
  const double n = static_cast<double>(out.samples);
  const double p = static_cast<double>(out.hits) / n;
  out.mc_mean = p * scale;
  const double var = n > 1 ? p * (1.0 - p) * n / (n - 1.0) : 0.0;
  out.mc_stderr = std::sqrt(var) * scale / std::sqrt(n);
  return out;
}

VolumeEstimate volume_mc(std::size_t k, double t, double B, std::uint64_t samples,
                         const SeedSpec& seed) {
  check_body(k, t, B);
  if (k > 8) throw ContractViolation("volume_mc: k must be <= 8");
  if (samples < 1000) throw ContractViolation("volume_mc: need at least 1000 samples");

  Rng rng = derive_stream(seed);
  const double half_width = std::sqrt(2.0 * B * t);
  std::array<TimeSpacePoint, 8> tuple{};
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      tuple[i].t = t * rng.uniform();
      tuple[i].x = half_width * (2.0 * rng.uniform() - 1.0);
    }
    std::sort(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(k),
              [](const TimeSpacePoint& a, const TimeSpacePoint& b) { return a.t < b.t; });
    if (entropy(std::span<const TimeSpacePoint>(tuple.data(), k)) <= B) ++hits;
  }

  VolumeEstimate est;
  est.k = k;
  est.t = t;
  est.B = B;
  est.seed = seed;
  est.exact = volume_exact(k, t, B);
  VolumeEstimate empty = est;
  est.samples = samples;
  est.hits = hits;
  // merge() with an empty batch recomputes mean and stderr from the counts.
  return VolumeEstimate::merge(est, empty);
}

double count_bound_discrete(std::size_t k, std::int64_t n, double B) {
  if (k == 0 || n < 1 || !(B > 0.0)) throw ContractViolation("need k >= 1, n >= 1, B > 0");
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(2.0) + log_entropy_body_constant(k) + 0.5 * kd * std::log(B) +
                  1.5 * kd * std::log(static_cast<double>(n)));
}

std::uint64_t count_discrete_exact(std::size_t k, std::int64_t n, double B) {
  if (k == 0 || n < 1 || !(B >= 0.0)) throw ContractViolation("need k >= 1, n >= 1, B >= 0");
  if (n > 12 || k > 3) throw ContractViolation("exhaustive counting is limited to n <= 12, k <= 3");
  return count_rec(k, 0, 0.0, 0.0, B, n);
}

}  // namespace elpp
