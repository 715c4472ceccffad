#include "elpp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace elpp {

Box Box::continuous(double t_max, double x_max) {
  if (!(t_max > 0.0) || !(x_max > 0.0) || !std::isfinite(t_max) || !std::isfinite(x_max)) {
    throw ContractViolation("box extents must be positive and finite");
  }
  return Box{BoxMode::Continuous, t_max, x_max};
}

Box Box::lattice(std::int64_t n, std::int64_t h) {
  // h = 0 is a legal degenerate lattice (a single column of sites).
  if (n < 1 || h < 0) throw ContractViolation("lattice box needs n >= 1 and h >= 0");
  return Box{BoxMode::Lattice, static_cast<double>(n), static_cast<double>(h)};
}

std::uint64_t Box::lattice_sites() const {
  if (!is_lattice()) throw ContractViolation("lattice_sites() on a continuous box");
  return static_cast<std::uint64_t>(n()) * static_cast<std::uint64_t>(2 * h() + 1);
}

bool Box::contains(const TimeSpacePoint& p) const noexcept {
  if (is_lattice()) {
    if (p.t != std::floor(p.t) || p.x != std::floor(p.x)) return false;
    return p.t >= 1.0 && p.t <= t_max && std::abs(p.x) <= x_max;
  }
  return p.t >= 0.0 && p.t <= t_max && std::abs(p.x) <= x_max;
}

std::string to_string(BoxMode mode) {
  return mode == BoxMode::Lattice ? "lattice" : "continuous";
}

BoxMode box_mode_from_string(const std::string& s) {
  if (s == "lattice") return BoxMode::Lattice;
  if (s == "continuous") return BoxMode::Continuous;
  throw ContractViolation("unknown box mode '" + s + "'");
}

double entropy(std::span<const TimeSpacePoint> points) {
  double total = 0.0;
  TimeSpacePoint prev = kOrigin;
  for (const auto& p : points) {
    if (p.t < prev.t) throw ContractViolation("entropy: points are not sorted by time");
    total += step_cost(prev, p);
    prev = p;
  }
  return total;
}

std::vector<std::size_t> canonical_permutation(std::span<const TimeSpacePoint> points) {
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = points[a];
    const auto& pb = points[b];
    if (pa.t != pb.t) return pa.t < pb.t;
    if (pa.x != pb.x) return pa.x < pb.x;
    return a < b;
  });
  return idx;
}

std::vector<TimeSpacePoint> canonical_order(std::span<const TimeSpacePoint> points) {
  std::vector<TimeSpacePoint> out;
  out.reserve(points.size());
  for (std::size_t i : canonical_permutation(points)) out.push_back(points[i]);
  return out;
}

DeltaPath DeltaPath::from_points(std::vector<TimeSpacePoint> pts) {
  DeltaPath path;
  path.entropy = elpp::entropy(pts);
  path.points = std::move(pts);
  return path;
}

}  // namespace elpp
