#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "elpp/rng.hpp"
#include "elpp/stats.hpp"

using namespace elpp;

TEST_CASE("two-sample KS by hand") {
  const std::vector<double> a{0.0, 1.0}, b{0.0, 2.0}, zero{0.0}, one{1.0};
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(zero, one) == 1.0);
  CHECK(ks_two_sample(a, b) == 0.5);
  CHECK(ks_two_sample(b, a) == 0.5);
  const std::vector<double> c{1, 2, 3, 4}, d{3, 4, 5, 6};
  CHECK(ks_two_sample(c, d) == 0.5);
  const std::vector<double> ties{1, 1, 1, 2}, other{1, 2, 2, 2};
  CHECK(ks_two_sample(ties, other) == 0.5);
  CHECK_THROWS(ks_two_sample({}, a));
}

TEST_CASE("one-sample KS") {
  const std::vector<double> s{0.5};
  CHECK(ks_one_sample(s, [](double x) { return x; }) == 0.5);
  Rng r = derive_stream({60, 0});
  std::vector<double> u(20000);
  for (double& v : u) v = r.uniform();
  CHECK(ks_one_sample(u, [](double x) { return x; }) < 0.015);
}

TEST_CASE("nearest-rank quantiles") {
  const std::vector<double> s{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(quantile_nearest_rank(s, 0.01) == 1);
  CHECK(quantile_nearest_rank(s, 0.25) == 3);
  CHECK(quantile_nearest_rank(s, 0.5) == 5);
  CHECK(quantile_nearest_rank(s, 0.95) == 10);
  CHECK(quantile_nearest_rank(s, 1.0) == 10);
  const std::vector<double> odd{3, 1, 2};
  CHECK(median(odd) == 2);
}

TEST_CASE("summary statistics") {
  const std::vector<double> s{4, 1, 3, 2};
  const auto st = summarize(s);
  CHECK(st.n_replicas == 4);
  CHECK(st.mean == 2.5);
  CHECK(st.variance == doctest::Approx(5.0 / 3.0));
  CHECK(st.quantiles[0] == 1);
  CHECK(st.median() == 2);
  CHECK(st.quantiles[6] == 4);
  CHECK_FALSE(st.ks_distance.has_value());
}

TEST_CASE("pooled moments merge like a single pass") {
  Rng r = derive_stream({61, 0});
  PooledMoments all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = r.normal() * 3 + 1;
    all.add(x);
    (i < 377 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.n == all.n);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-12));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  PooledMoments empty;
  empty.merge(all);
  CHECK(empty.mean == all.mean);
  CHECK(PooledMoments{}.variance() == 0.0);
}

TEST_CASE("least-squares slope") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  CHECK(ls_slope(x, y) == doctest::Approx(2.0));
}
