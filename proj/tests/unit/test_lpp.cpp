#include <doctest.h>

#include <cmath>
#include <vector>

#include "elpp/environment.hpp"
#include "elpp/lpp_solver.hpp"

using namespace elpp;

namespace {

Environment pair_cloud() { return make_cloud(Box::continuous(1, 2), {{0.5, 1}, {1, 2}}); }

bool witness_ok(const Environment& env, const ElppResult& r, double budget) {
  if (r.witness.size() != r.value || r.witness_entries.size() != r.value) return false;
  for (std::size_t i = 0; i < r.value; ++i) {
    if (!(env.entries[r.witness_entries[i]].location == r.witness.points[i])) return false;
    if (i > 0 && !(r.witness.points[i].t > r.witness.points[i - 1].t)) return false;
  }
  return entropy(r.witness.points) <= budget && r.witness.entropy == entropy(r.witness.points);
}

}  // namespace

TEST_CASE("frontier on hand instances") {
  const auto single = build_frontier(make_cloud(Box::continuous(1, 2), {{1, 2}}));
  CHECK(single.min_entropy(0, 1) == 2.0);
  CHECK(single.max_count() == 1);

  const auto f = build_frontier(pair_cloud());
  CHECK(f.min_entropy(0, 1) == 1.0);
  CHECK(f.min_entropy(1, 1) == 2.0);
  CHECK(f.min_entropy(1, 2) == 2.0);
  CHECK(std::isinf(f.min_entropy(0, 2)));
  CHECK(f.predecessor(1, 2) == std::optional<std::size_t>(0));
  CHECK_FALSE(f.predecessor(1, 1).has_value());
  CHECK(f.path_indices(1, 2) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("frontier pigeonhole and backpointers") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto env = sample_uniform_cloud(15, Box::continuous(1, 1), {20, s});
    const auto f = build_frontier(env);
    for (std::size_t j = 0; j < f.num_points(); ++j) {
      // Canonical index j has exactly j points strictly before it (times are distinct).
      for (std::size_t k = j + 2; k <= 15; ++k) CHECK(std::isinf(f.min_entropy(j, k)));
      for (std::size_t k = 1; k <= f.row(j).size(); ++k) {
        const auto p = f.path(j, k);
        CHECK(p.size() == k);
        CHECK(p.entropy == doctest::Approx(f.min_entropy(j, k)).epsilon(1e-12));
        if (k > 1) CHECK(f.min_entropy(j, k) >= f.min_entropy(j, k - 1));
      }
    }
  }
}

TEST_CASE("elpp value edge cases") {
  const auto env = sample_uniform_cloud(20, Box::continuous(1, 1), {21, 0});
  CHECK(elpp_value(env, 0.0).value == 0);
  CHECK(elpp_value(env, kInfinity).value == 20);
  CHECK(elpp_count(env.locations(), kInfinity) == 20);
  CHECK_THROWS_AS(elpp_value(env, -1.0), ContractViolation);
  CHECK(elpp_value(env, kInfinity, 5).value == 5);

  const auto on_axis = make_cloud(Box::continuous(1, 1), {{1, 0}});
  CHECK(brute_force_elpp(on_axis, 0.0) == 1);
  CHECK(elpp_value(on_axis, 0.0).value == 1);
  CHECK(elpp_count(on_axis.locations(), 0.0) == 1);

  const Environment empty = make_cloud(Box::continuous(1, 1), {});
  CHECK(brute_force_elpp(empty, 1.0) == 0);
  CHECK(elpp_value(empty, 1.0).value == 0);
}

TEST_CASE("min entropy for count") {
  CHECK(min_entropy_for_count(pair_cloud(), 2) == 2.0);
  CHECK(min_entropy_for_count(pair_cloud(), 1) == 1.0);
  const auto same_time = make_cloud(Box::continuous(1, 1), {{0.5, 0}, {0.5, 1}});
  CHECK(std::isinf(min_entropy_for_count(same_time, 2)));
  CHECK_THROWS_AS(min_entropy_for_count(pair_cloud(), 0), ContractViolation);
  CHECK_THROWS_AS(min_entropy_for_count(pair_cloud(), 3), ContractViolation);
}

TEST_CASE("three solvers agree on small clouds") {
  std::size_t checked = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto env = s % 2 ? sample_uniform_cloud(10, Box::continuous(1, 1), {22, s})
                           : sample_lattice_cloud(10, Box::lattice(5, 2), {22, s});
    const auto pts = env.locations();
    for (double B : {0.0, 0.1, 1.0, 10.0}) {
      const auto r = elpp_value(env, B);
      const std::size_t brute = brute_force_elpp(env, B);
      CHECK(r.value == brute);
      CHECK(elpp_count(pts, B, LppAlgorithm::Frontier) == brute);
      CHECK(elpp_count(pts, B, LppAlgorithm::Bounded) == brute);
      CHECK(witness_ok(env, r, B));
      ++checked;
    }
  }
  CHECK(checked == 4000);
}

TEST_CASE("bounded solver matches the frontier on larger clouds") {
  BoundedLppStats st;
  for (std::uint64_t s = 0; s < 60; ++s) {
    const std::size_t m = 100 + 20 * s;
    const auto env = s % 3 == 0 ? sample_lattice_cloud(m, Box::lattice(40, 20), {23, s})
                                : sample_uniform_cloud(m, Box::continuous(1, 1), {23, s});
    const auto pts = env.locations();
    const double scale = env.box.is_lattice() ? 40.0 : 1.0;
    for (double b : {0.05, 0.5, 1.0, 4.0}) {
      const double B = b * scale;
      CHECK(elpp_count(pts, B, LppAlgorithm::Bounded, &st) ==
            elpp_count(pts, B, LppAlgorithm::Frontier));
      CHECK(st.lower_bound <= st.upper_bound);
    }
  }
}

TEST_CASE("duality between value and least entropy") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto env = sample_uniform_cloud(10, Box::continuous(1, 1), {24, s});
    std::vector<double> least(11);
    for (std::size_t k = 1; k <= 10; ++k) least[k] = min_entropy_for_count(env, k);
    for (int i = 0; i < 20; ++i) {
      const double B = std::pow(10.0, -2.0 + 4.0 * i / 19.0);
      const std::size_t v = elpp_value(env, B).value;
      for (std::size_t k = 1; k <= 10; ++k) CHECK((least[k] <= B) == (v >= k));
    }
    // At B equal to the least entropy the count is attained exactly.
    for (std::size_t k = 1; k <= 10; ++k) {
      if (std::isfinite(least[k])) CHECK(elpp_value(env, least[k]).value >= k);
    }
  }
}

TEST_CASE("value is monotone in the budget and invariant under reflection") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto env = sample_uniform_cloud(200, Box::continuous(1, 1), {25, s});
    std::size_t prev = 0;
    for (double B : {0.01, 0.1, 0.3, 1.0, 3.0, 10.0}) {
      const std::size_t v = elpp_value(env, B).value;
      CHECK(v >= prev);
      prev = v;
      auto pts = env.locations();
      for (auto& p : pts) p.x = -p.x;
      CHECK(elpp_count(pts, B) == v);
    }
  }
}

TEST_CASE("brute force guard") {
  const auto env = sample_uniform_cloud(21, Box::continuous(1, 1), {26, 0});
  CHECK_THROWS_AS(brute_force_elpp(env, 1.0), ContractViolation);
}
