#include <doctest.h>

#include <cmath>
#include <vector>

#include "elpp/core.hpp"
#include "elpp/rng.hpp"

using namespace elpp;

namespace {

std::vector<TimeSpacePoint> random_path(Rng& rng, std::size_t len) {
  std::vector<TimeSpacePoint> pts;
  double t = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    t += 0.01 + rng.uniform();
    pts.push_back({t, 4.0 * rng.uniform() - 2.0});
  }
  return pts;
}

}  // namespace

TEST_CASE("entropy of small sequences") {
  std::vector<TimeSpacePoint> one{{1, 2}};
  CHECK(entropy(one) == 2.0);
  std::vector<TimeSpacePoint> two{{0.5, 1}, {1, 1}};
  CHECK(entropy(two) == 1.0);
  std::vector<TimeSpacePoint> tie{{0.3, 0}, {0.3, 5}};
  CHECK(std::isinf(entropy(tie)));
  CHECK(entropy({}) == 0.0);
}

TEST_CASE("entropy rejects decreasing times") {
  std::vector<TimeSpacePoint> bad{{1, 0}, {0.5, 0}};
  CHECK_THROWS_AS(entropy(bad), ContractViolation);
}

TEST_CASE("step cost") {
  CHECK(step_cost({0, 0}, {1, 2}) == 2.0);
  CHECK(std::isinf(step_cost({0.5, 1}, {0.5, 3})));
  CHECK(step_cost({1, 1}, {2, 1}) == 0.0);
  CHECK(std::isinf(step_cost({1, 0}, {0.5, 0})));
}

TEST_CASE("canonical order") {
  std::vector<TimeSpacePoint> a{{1, 0}, {0.5, 2}};
  CHECK(canonical_order(a) == std::vector<TimeSpacePoint>{{0.5, 2}, {1, 0}});
  std::vector<TimeSpacePoint> b{{1, 3}, {1, -2}};
  CHECK(canonical_order(b) == std::vector<TimeSpacePoint>{{1, -2}, {1, 3}});
  CHECK(canonical_order({}).empty());

  std::vector<TimeSpacePoint> dup{{1, 1}, {0, 0}, {1, 1}};
  CHECK(canonical_permutation(dup) == std::vector<std::size_t>{1, 0, 2});
}

TEST_CASE("entropy is additive over a split") {
  Rng rng = derive_stream({1, 0});
  for (int rep = 0; rep < 100; ++rep) {
    auto pts = random_path(rng, 6);
    std::vector<TimeSpacePoint> head(pts.begin(), pts.begin() + 3);
    double tail = 0.0;
    for (std::size_t i = 3; i < pts.size(); ++i) tail += step_cost(pts[i - 1], pts[i]);
    CHECK(entropy(pts) == doctest::Approx(entropy(head) + tail).epsilon(1e-14));
  }
}

TEST_CASE("reflection and scaling") {
  Rng rng = derive_stream({2, 0});
  for (int rep = 0; rep < 200; ++rep) {
    auto pts = random_path(rng, 1 + rep % 7);
    const double base = entropy(pts);
    const double a = 0.1 + 5.0 * rng.uniform();
    auto mirrored = pts, xs = pts, ts = pts;
    for (auto& p : mirrored) p.x = -p.x;
    for (auto& p : xs) p.x *= a;
    for (auto& p : ts) p.t *= a;
    CHECK(entropy(mirrored) == base);
    CHECK(std::abs(entropy(xs) - a * a * base) <= 1e-12 * a * a * base);
    CHECK(std::abs(entropy(ts) - base / a) <= 1e-12 * base / a);
  }
}

TEST_CASE("feasible paths stay inside the parabola") {
  Rng rng = derive_stream({3, 0});
  for (int rep = 0; rep < 500; ++rep) {
    auto pts = random_path(rng, 5);
    const double B = entropy(pts);
    for (const auto& p : pts) CHECK(std::abs(p.x) <= std::sqrt(2.0 * B * p.t) * (1 + 1e-12));
  }
}

TEST_CASE("boxes") {
  const Box c = Box::continuous(2, 1);
  CHECK(c.contains({0, 0}));
  CHECK(c.contains({2, -1}));
  CHECK_FALSE(c.contains({2.1, 0}));
  CHECK_THROWS_AS(Box::continuous(0, 1), ContractViolation);

  const Box l = Box::lattice(4, 2);
  CHECK(l.lattice_sites() == 20);
  CHECK(l.contains({1, -2}));
  CHECK_FALSE(l.contains({0, 0}));
  CHECK_FALSE(l.contains({1.5, 0}));
  CHECK(box_mode_from_string(to_string(BoxMode::Lattice)) == BoxMode::Lattice);
}

TEST_CASE("delta path caches entropy") {
  auto p = DeltaPath::from_points({{0.5, 1}, {1, 2}});
  CHECK(p.entropy == 2.0);
  CHECK(p.size() == 2);
  CHECK(DeltaPath::from_points({}).empty());
}
