#pragma once

// Geometry and the entropy functional shared by every solver.
//
// A point sequence Delta = ((t_1,x_1),...,(t_j,x_j)) sorted by time has
// entropy 1/2 * sum (x_i - x_{i-1})^2 / (t_i - t_{i-1}) with the implicit
// start (t_0,x_0) = (0,0). Equal consecutive times give +inf, which is
// represented by the IEEE double infinity and propagates through sums.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace elpp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on unreadable or malformed input/output files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeSpacePoint {
  double t = 0.0;
  double x = 0.0;

  friend bool operator==(const TimeSpacePoint&, const TimeSpacePoint&) = default;
};

/// The implicit starting point of every path. Never stored in a cloud.
inline constexpr TimeSpacePoint kOrigin{0.0, 0.0};

enum class BoxMode { Continuous, Lattice };

/// Continuous box [0,t_max] x [-x_max,x_max], or the lattice box
/// [[1,n]] x [[-h,h]] with n = t_max and h = x_max.
struct Box {
  BoxMode mode = BoxMode::Continuous;
  double t_max = 1.0;
  double x_max = 1.0;

  static Box continuous(double t_max, double x_max);
  static Box lattice(std::int64_t n, std::int64_t h);

  bool is_lattice() const noexcept { return mode == BoxMode::Lattice; }
  std::int64_t n() const noexcept { return static_cast<std::int64_t>(t_max); }
  std::int64_t h() const noexcept { return static_cast<std::int64_t>(x_max); }
  /// Number of lattice sites n * (2h + 1). Lattice boxes only.
  std::uint64_t lattice_sites() const;
  bool contains(const TimeSpacePoint& p) const noexcept;

  friend bool operator==(const Box&, const Box&) = default;
};

std::string to_string(BoxMode mode);
BoxMode box_mode_from_string(const std::string& s);

/// 1/2 (x_to - x_from)^2 / (t_to - t_from), or +inf when t_to <= t_from.
inline double step_cost(const TimeSpacePoint& from, const TimeSpacePoint& to) noexcept {
  const double dt = to.t - from.t;
  if (!(dt > 0.0)) return kInfinity;
  const double dx = to.x - from.x;
  return 0.5 * dx * dx / dt;
}

/// Entropy of a time-sorted point sequence, starting from the origin.
/// Throws ContractViolation if the times decrease anywhere.
double entropy(std::span<const TimeSpacePoint> points);

/// Indices that sort by (t, x, original index).
std::vector<std::size_t> canonical_permutation(std::span<const TimeSpacePoint> points);

/// Points sorted by (t, x, original index).
std::vector<TimeSpacePoint> canonical_order(std::span<const TimeSpacePoint> points);

/// A time-ordered point sequence together with its (cached) entropy.
struct DeltaPath {
  std::vector<TimeSpacePoint> points;
  double entropy = 0.0;

  /// Builds a path and computes its entropy; the points must be time-sorted.
  static DeltaPath from_points(std::vector<TimeSpacePoint> pts);

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

}  // namespace elpp
