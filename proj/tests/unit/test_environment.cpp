#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "elpp/environment.hpp"
#include "elpp/stats.hpp"

using namespace elpp;

TEST_CASE("uniform cloud support and determinism") {
  const Box box = Box::continuous(1, 1);
  const auto one = sample_uniform_cloud(1, box, {9, 9});
  REQUIRE(one.size() == 1);
  CHECK(box.contains(one.entries[0].location));
  CHECK(one.entries[0].weight == 1.0);
  CHECK(one.kind == EnvKind::UniformCloud);

  CHECK(sample_uniform_cloud(50, box, {1, 2}) == sample_uniform_cloud(50, box, {1, 2}));
  CHECK_FALSE(sample_uniform_cloud(50, box, {1, 2}) == sample_uniform_cloud(50, box, {1, 3}));
  CHECK_THROWS_AS(sample_uniform_cloud(0, box, {1, 2}), ContractViolation);
}

TEST_CASE("uniform cloud time mean") {
  const auto env = sample_uniform_cloud(10000, Box::continuous(1, 1), {11, 0});
  double mean = 0.0;
  for (const auto& e : env.entries) mean += e.location.t;
  mean /= 10000.0;
  const double sigma = std::sqrt(1.0 / 12.0 / 10000.0);
  CHECK(std::abs(mean - 0.5) < 3 * sigma);
  CHECK((mean > 0.49 && mean < 0.51));
}

TEST_CASE("lattice cloud") {
  SUBCASE("full box") {
    const Box box = Box::lattice(4, 2);
    const auto env = sample_lattice_cloud(20, box, {1, 0});
    std::set<std::pair<double, double>> seen;
    for (const auto& e : env.entries) seen.insert({e.location.t, e.location.x});
    CHECK(seen.size() == 20);
    for (const auto& [t, x] : seen) CHECK(box.contains({t, x}));
  }
  SUBCASE("too many points") {
    CHECK_THROWS_AS(sample_lattice_cloud(2, Box::lattice(1, 0), {1, 0}), ContractViolation);
  }
  SUBCASE("distinct") {
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto env = sample_lattice_cloud(5, Box::lattice(10, 3), {2, s});
      std::set<std::pair<double, double>> seen;
      for (const auto& e : env.entries) seen.insert({e.location.t, e.location.x});
      CHECK(seen.size() == 5);
      CHECK(env.kind == EnvKind::LatticeCloud);
    }
  }
  SUBCASE("huge sparse box") {
    const auto env = sample_lattice_cloud(100, Box::lattice(1000000000, 1000000000), {3, 0});
    CHECK(env.size() == 100);
    CHECK_NOTHROW(env.validate());
  }
  SUBCASE("site marginal is uniform") {
    const Box box = Box::lattice(3, 1);
    std::array<int, 9> hits{};
    for (std::uint64_t s = 0; s < 9000; ++s) {
      for (const auto& e : sample_lattice_cloud(3, box, {4, s}).entries) {
        ++hits[static_cast<std::size_t>((e.location.t - 1) * 3 + e.location.x + 1)];
      }
    }
    for (int h : hits) CHECK(std::abs(h - 3000) < 5 * std::sqrt(3000.0));
  }
}

TEST_CASE("lattice field weights") {
  const Box box = Box::lattice(30, 10);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto env = sample_lattice_field(box, 1.3, {5, s}, 40);
    REQUIRE(env.size() == 40);
    CHECK(env.kind == EnvKind::LatticeField);
    CHECK_NOTHROW(env.validate());
    for (std::size_t i = 0; i < env.size(); ++i) {
      CHECK(env.entries[i].weight >= 1.0);
      if (i > 0) CHECK(env.entries[i].weight < env.entries[i - 1].weight);
    }
  }
  CHECK_THROWS_AS(sample_lattice_field(box, 2.0, {5, 0}, 4), ContractViolation);
  CHECK_THROWS_AS(sample_lattice_field(box, 1.0, {5, 0}, 0), ContractViolation);
  CHECK_THROWS_AS(sample_lattice_field(Box::lattice(1, 0), 1.0, {5, 0}, 2), ContractViolation);
}

TEST_CASE("largest lattice weight is Frechet") {
  const Box box = Box::lattice(100, 100);
  const double alpha = 1.0;
  const double sites = static_cast<double>(box.lattice_sites());
  std::vector<double> y;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    y.push_back(sample_lattice_field(box, alpha, {6, s}, 1).entries[0].weight / m_of(sites, alpha));
  }
  const double d_limit = ks_one_sample(y, [&](double v) { return std::exp(-std::pow(v, -alpha)); });
  CHECK(d_limit < 0.05);
  // Finite-N law (1 - x^{-a})^N at x = y m(N).
  const double d_exact = ks_one_sample(y, [&](double v) {
    return std::exp(sites * std::log1p(-std::pow(v * m_of(sites, alpha), -alpha)));
  });
  CHECK(d_exact < 0.05);
}

TEST_CASE("order-statistic shortcut matches the full field") {
  // Materialize every site with Pareto draws from an unrelated stream and
  // compare the laws of the 1st and 3rd largest weights and the argmax time.
  const Box box = Box::lattice(20, 5);
  const double alpha = 0.8;
  const std::size_t sites = box.lattice_sites();
  std::vector<double> s1, s3, st, f1, f3, ft;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    const auto env = sample_lattice_field(box, alpha, {7, s}, 3);
    s1.push_back(env.entries[0].weight);
    s3.push_back(env.entries[2].weight);
    st.push_back(env.entries[0].location.t);

    Rng rng = derive_stream({8, s});
    std::vector<std::pair<double, std::size_t>> w(sites);
    for (std::size_t i = 0; i < sites; ++i) w[i] = {std::pow(rng.uniform_open(), -1.0 / alpha), i};
    std::partial_sort(w.begin(), w.begin() + 3, w.end(), std::greater<>());
    f1.push_back(w[0].first);
    f3.push_back(w[2].first);
    ft.push_back(static_cast<double>(w[0].second / 11 + 1));
  }
  CHECK(ks_two_sample(s1, f1) < 0.05);
  CHECK(ks_two_sample(s3, f3) < 0.05);
  CHECK(ks_two_sample(st, ft) < 0.05);
}

TEST_CASE("ppp records from fixed draws") {
  const std::vector<double> e{0.5, 1.5};
  const std::vector<TimeSpacePoint> y{{0.2, 0.1}, {0.7, -0.4}};
  const auto env = ppp_from_draws(1.0, 1.0, e, y);
  REQUIRE(env.size() == 2);
  CHECK(env.entries[0].weight == doctest::Approx(4.0));
  CHECK(env.entries[1].weight == doctest::Approx(1.0));
  CHECK(env.entries[0].location == y[0]);
  CHECK(env.kind == EnvKind::Ppp);
}

TEST_CASE("ppp records decrease and live in the strip") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto env = sample_ppp_ordered(30, 0.7, 3.0, {9, s});
    for (std::size_t i = 0; i < env.size(); ++i) {
      CHECK(Box::continuous(1, 3).contains(env.entries[i].location));
      if (i > 0) CHECK(env.entries[i].weight < env.entries[i - 1].weight);
    }
  }
  CHECK_THROWS_AS(sample_ppp_ordered(0, 1.0, 1.0, {1, 0}), ContractViolation);
  CHECK_THROWS_AS(sample_ppp_ordered(5, 0.0, 1.0, {1, 0}), ContractViolation);
  CHECK_THROWS_AS(sample_ppp_ordered(5, 1.0, 0.0, {1, 0}), ContractViolation);
}

TEST_CASE("first ppp record has the exponential tail") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const double q = 2.0;
    std::vector<double> m1;
    for (std::uint64_t s = 0; s < 5000; ++s) {
      m1.push_back(sample_ppp_ordered(1, alpha, q, {10, s}).entries[0].weight);
    }
    const double d = ks_one_sample(m1, [&](double y) { return std::exp(-2.0 * q * std::pow(y, -alpha)); });
    CHECK(d < 0.05);
  }
}

TEST_CASE("pareto quantile") {
  CHECK(m_of(100, 2) == doctest::Approx(10.0));
  CHECK(m_of(1, 0.3) == 1.0);
  CHECK(m_of(std::numbers::e, 1) == doctest::Approx(std::numbers::e));
  CHECK_THROWS_AS(m_of(0.5, 1), ContractViolation);
}

TEST_CASE("hand-built environments") {
  const auto w = make_weighted(Box::continuous(1, 1), {{1, {0.2, 0}}, {3, {0.4, 0}}, {2, {0.6, 0}}});
  CHECK(w.entries[0].weight == 3);
  CHECK(w.entries[2].weight == 1);
  CHECK_THROWS_AS(make_cloud(Box::continuous(1, 1), {{2, 0}}), ContractViolation);
  CHECK_THROWS_AS(make_cloud(Box::lattice(3, 3), {{1, 0}, {1, 0}}), ContractViolation);
  CHECK(env_kind_from_string(to_string(EnvKind::LatticeField)) == EnvKind::LatticeField);
}
