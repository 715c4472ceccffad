#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "elpp/environment.hpp"
#include "elpp/variational.hpp"

using namespace elpp;

namespace {

Environment single(double w, TimeSpacePoint p) { return make_weighted(Box::continuous(1, 1), {{w, p}}); }

// Best beta * energy - entropy over all subsets of the first ell entries.
double subset_max(const Environment& env, double beta, std::size_t ell, std::size_t first = 0) {
  const std::size_t n = ell - first;
  double best = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Entry> chosen;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) chosen.push_back(env.entries[first + i]);
    }
    std::sort(chosen.begin(), chosen.end(),
              [](const Entry& a, const Entry& b) { return a.location.t < b.location.t; });
    std::vector<TimeSpacePoint> pts;
    double w = 0.0;
    for (const auto& e : chosen) {
      pts.push_back(e.location);
      w += e.weight;
    }
    best = std::max(best, beta * w - entropy(pts));
  }
  return best;
}

}  // namespace

TEST_CASE("single entry") {
  const auto env = single(1.0, {0.5, 1});
  const auto r = solve_variational(env, 4.0, 1);
  CHECK(r.value == doctest::Approx(3.0));
  CHECK(r.argmax_entries == std::vector<std::size_t>{0});
  CHECK(r.energy == 1.0);

  const auto z = solve_variational(env, 0.5, 1);
  CHECK(z.value == 0.0);
  CHECK(z.argmax.empty());
}

TEST_CASE("preconditions") {
  const auto env = single(1.0, {0.5, 1});
  CHECK_THROWS_AS(solve_variational(env, -1.0, 1), ContractViolation);
  CHECK_THROWS_AS(solve_variational(env, 1.0, 2), ContractViolation);
  CHECK(solve_variational(env, 1.0, 0).value == 0.0);
  CHECK_THROWS_AS(solve_tail(env, 1.0, 1), ContractViolation);
}

TEST_CASE("dynamic program matches subset enumeration") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto env = sample_ppp_ordered(10, 1.2, 2.0, {30, s});
    for (double beta : {0.1, 0.5, 2.0, 8.0}) {
      const auto r = solve_variational(env, beta, 10);
      CHECK(std::abs(r.value - subset_max(env, beta, 10)) <= 1e-9 * std::max(1.0, r.value));
      CHECK(r.value == doctest::Approx(beta * r.energy - r.argmax.entropy));
    }
  }
}

TEST_CASE("tail problem") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto env = sample_ppp_ordered(12, 1.0, 1.0, {31, s});
    const double beta = 1.5;
    CHECK(solve_tail(env, beta, 0).value == solve_variational(env, beta, 12).value);
    double prev = kInfinity;
    for (std::size_t ell = 0; ell < 12; ++ell) {
      const auto r = solve_tail(env, beta, ell);
      CHECK(r.value <= prev);
      prev = r.value;
      CHECK(r.value == doctest::Approx(subset_max(env, beta, 12, ell)).epsilon(1e-12));
      for (std::size_t id : r.argmax_entries) CHECK(id >= ell);
    }
  }
  const auto env = make_weighted(Box::continuous(1, 1), {{2, {0.2, 0.1}}, {1, {0.5, 1}}});
  CHECK(solve_tail(env, 0.5, 1).value == 0.0);
}

TEST_CASE("continuum truncation monotonicity") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    CHECK(continuum_T_truncated(1.0, 0.0, 1.0, 20, {32, s}).value == 0.0);
    double prev = 0.0;
    for (double nu : {0.1, 0.5, 1.0, 2.0}) {
      const double v = continuum_T_truncated(1.0, nu, 1.0, 20, {32, s}).value;
      CHECK(v >= prev);
      prev = v;
    }
    prev = 0.0;
    for (std::size_t ell : {1, 2, 5, 10, 20, 40}) {
      const double v = continuum_T_truncated(0.8, 1.0, 2.0, ell, {32, s}).value;
      CHECK(v >= prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(continuum_T_truncated(1.0, -1.0, 1.0, 5, {1, 0}), ContractViolation);
}

TEST_CASE("beta sweep") {
  const auto env = sample_ppp_ordered(8, 1.0, 2.0, {33, 0});
  const std::vector<double> zero{0.0};
  CHECK(beta_sweep(env, zero, 8).values == std::vector<double>{0.0});

  const std::vector<double> dup{0.5, 0.5, 1.0};
  const auto d = beta_sweep(env, dup, 8);
  CHECK(d.values[0] == d.values[1]);
  CHECK(d.argmax_ids[0] == d.argmax_ids[1]);

  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS_AS(beta_sweep(env, bad, 8), ContractViolation);
}

TEST_CASE("beta sweep follows the affine envelope") {
  // Each subset contributes the line beta * W - Ent; the value curve is their
  // upper envelope, and the argmax changes only where the envelope bends.
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto env = sample_ppp_ordered(8, 1.0, 2.0, {34, s});
    std::vector<double> betas;
    for (int i = 0; i <= 60; ++i) betas.push_back(0.05 * i);
    const auto sweep = beta_sweep(env, betas, 8);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      CHECK(sweep.values[i] == doctest::Approx(subset_max(env, betas[i], 8)).epsilon(1e-12));
    }
    for (std::size_t i = 1; i + 1 < betas.size(); ++i) {
      const double second = sweep.values[i + 1] - 2 * sweep.values[i] + sweep.values[i - 1];
      CHECK(second >= -1e-9);
      if (sweep.argmax_ids[i - 1] == sweep.argmax_ids[i + 1] &&
          sweep.argmax_ids[i] == sweep.argmax_ids[i - 1]) {
        CHECK(std::abs(second) <= 1e-9 * std::max(1.0, sweep.values[i + 1]));
      }
    }
  }
}

TEST_CASE("maximizer uniqueness") {
  const auto one = single(1.0, {0.5, 0.2});
  const auto u = check_maximizer_unique(one, 2.0, 1);
  CHECK(u.unique);
  REQUIRE(u.maximizers.size() == 1);
  CHECK(u.maximizers[0] == std::vector<std::size_t>{0});

  const auto mirror =
      make_weighted(Box::continuous(1, 1), {{1.0, {0.5, 0.5}}, {1.0, {0.5, -0.5}}});
  const auto tie = check_maximizer_unique(mirror, 2.0, 2);
  CHECK_FALSE(tie.unique);
  CHECK(tie.maximizers.size() == 2);
  // The tie-break picks the lower canonical (t, x) point.
  CHECK(solve_variational(mirror, 2.0, 2).argmax.points[0].x == -0.5);

  std::size_t unique = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    if (check_maximizer_unique(sample_ppp_ordered(8, 1.0, 1.0, {35, s}), 1.0, 8).unique) ++unique;
  }
  CHECK(unique == 1000);
  CHECK_THROWS_AS(check_maximizer_unique(sample_ppp_ordered(16, 1.0, 1.0, {1, 0}), 1.0, 16),
                  ContractViolation);
}
