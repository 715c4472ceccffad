#pragma once

// Acceptance criteria as callable checks, shared by the acceptance test
// binary and the CLI `selftest` subcommand. Each check runs at full size and
// reports what it measured next to its threshold.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace elpp {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  /// Wall-clock budget; 0 = none. Exceeding it fails the check.
  double time_limit = 0.0;
};

struct CheckOptions {
  std::size_t threads = 1;
};

CheckResult check_volume_anchor(const CheckOptions& opt);
CheckResult check_elpp_oracle(const CheckOptions& opt);
CheckResult check_variational_oracle(const CheckOptions& opt);
CheckResult check_duality(const CheckOptions& opt);
CheckResult check_scale_law(const CheckOptions& opt);
CheckResult check_scaling_relation(const CheckOptions& opt);
CheckResult check_tail_exponent(const CheckOptions& opt);
CheckResult check_convergence(const CheckOptions& opt);
CheckResult check_blowup(const CheckOptions& opt);
CheckResult check_determinism(const CheckOptions& opt);

struct CheckEntry {
  int id;
  bool fast;  // part of the quick selftest
  std::function<CheckResult(const CheckOptions&)> run;
};

/// All checks in criterion order.
const std::vector<CheckEntry>& all_checks();

/// Runs the selected checks (all when ids is empty), reporting each result as
/// soon as it is available. Returns true when every check passed.
bool run_checks(const std::vector<int>& ids, const CheckOptions& opt,
                const std::function<void(const CheckResult&)>& report);

std::string format_check(const CheckResult& r);

}  // namespace elpp
