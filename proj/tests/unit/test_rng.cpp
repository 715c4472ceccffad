#include <doctest.h>

#include <cmath>
#include <set>

#include "elpp/rng.hpp"

using namespace elpp;

TEST_CASE("streams are pure functions of the seed") {
  CHECK(derive_stream({42, 7}).state() == derive_stream({42, 7}).state());
  CHECK(derive_stream({42, 0}).state() != derive_stream({42, 1}).state());
  CHECK(derive_stream({0, 1}).state() != derive_stream({1, 0}).state());
}

TEST_CASE("adjacent streams are uncorrelated") {
  Rng a = derive_stream({2024, 0});
  Rng b = derive_stream({2024, 1});
  const int n = 1000000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double rho = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  CHECK(std::abs(rho) < 0.01);
}

TEST_CASE("uniform ranges") {
  Rng r = derive_stream({5, 5});
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const double v = r.uniform_open();
    CHECK((v > 0.0 && v < 1.0));
  }
}

TEST_CASE("below is uniform and in range") {
  Rng r = derive_stream({6, 0});
  std::array<int, 7> counts{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = r.below(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n / 7.0));
}

TEST_CASE("moments of the continuous variates") {
  Rng r = derive_stream({7, 0});
  const int n = 200000;
  double e = 0, z = 0, z2 = 0, g = 0;
  for (int i = 0; i < n; ++i) {
    e += r.exponential();
    const double x = r.normal();
    z += x;
    z2 += x * x;
    g += r.gamma(3.5);
  }
  CHECK(e / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(z / n) < 0.01);
  CHECK(z2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(g / n == doctest::Approx(3.5).epsilon(0.01));
}
