#pragma once

// Invariant suite behind the `verify` command: closed-form cross-checks,
// channel properties, measure properties, optimizer soundness and the
// reversal-protocol dominance grid.

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "cadwmr/optimizer.hpp"
#include "cadwmr/qstate.hpp"

namespace cadwmr {

inline constexpr std::array<const char*, 5> kVerifyGroups = {"closed_forms", "channel", "measures",
                                                             "optimizer", "dominance"};

struct VerifyOptions {
  ClosedFormGrid grid;
  std::set<std::string> groups{kVerifyGroups.begin(), kVerifyGroups.end()};
  std::uint64_t seed = 1;
  int random_states = 10000;
  int unitaries = 50;
  int tdd_states = 40;
  bool parallel = true;
};

struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  std::string to_text() const;
};

/// Throws ConfigError on an unknown group name.
VerifyReport run_verification(const VerifyOptions& options);

struct DominancePoint {
  StateFamily family;
  double p = 0.0, q = 0.0, eta = 0.0;
  double c_none = 0.0, c_one = 0.0, c_two = 0.0;
};

struct DominanceReport {
  std::vector<DominancePoint> points;
  std::vector<DominancePoint> violations;  // c_two < c_one - tol or c_one < c_none - tol
  std::vector<DominancePoint> strict;      // the (p = 0.5, q = 0.8) points
  double tolerance = 1e-9;
  double strict_margin = 1e-3;

  bool ordering_holds() const { return violations.empty(); }
  /// c_two - c_one > margin and c_one - c_none > margin at every strict point.
  bool strict_holds() const;
};

/// Families Bell, Werner(0.8), MEMS(0.8); p, q in {0.1, ..., 0.9}; eta in {0, 1};
/// concurrence at the optimal reversal strength per mode.
DominanceReport wmr_dominance(double tolerance = 1e-9, const OptimizerConfig& optimizer = {},
                              bool parallel = true);

}  // namespace cadwmr
