#pragma once

// Optimal measurement-reversal strength and the closed-form Bell-state
// concurrence used to cross-check the numeric pipeline.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cadwmr/channel.hpp"
#include "cadwmr/qstate.hpp"

namespace cadwmr {

struct OptimizerConfig {
  double grid_step = 1e-3;
  double r_max = 1.0 - 1e-6;
  double tolerance = 1e-8;  // final bracket width of the golden-section refinement
};

struct OptimizationResult {
  double r_star = 0.0;
  double concurrence_at_star = 0.0;
  double success_probability = 1.0;
  long evaluations = 0;
};

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  long evaluations = 0;
};

/// Maximizes a unimodal f on [a, b] until the bracket is narrower than tol.
GoldenResult golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                     double tol);

/// Concurrence of the pipeline output as a function of r; NaN when the
/// pipeline is degenerate at r.
double pipeline_concurrence(const DensityMatrix4& rho, const ChannelParams& channel, double q,
                            double r, WmrMode mode);

/// r* maximizing the output concurrence over [0, r_max]: coarse grid, then
/// golden-section refinement around the best grid point. Ties go to the
/// smaller r; a zero plateau returns the smallest r reaching the grid maximum.
OptimizationResult optimal_qmr(const DensityMatrix4& rho, const ChannelParams& channel, double q,
                               WmrMode mode, const OptimizerConfig& config = {});
OptimizationResult optimal_qmr(const StateFamily& family, const ChannelParams& channel, double q,
                               WmrMode mode, const OptimizerConfig& config = {});

/// Closed-form concurrence of the Bell state after WM -> CAD -> QMR
/// (one- or two-qubit protocol), transcribed from the symbolic solution.
double closed_form_concurrence_bell(double p, double q, double r, double eta, WmrMode mode);

struct ClosedFormGrid {
  int points_per_axis = 5;
  double axis_max = 0.95;
  /// Coordinates pinned to a single value, keyed by "p", "q", "r", "eta".
  std::map<std::string, double> slice;
  double tolerance = 1e-9;
  /// Tolerance between the structural and the general-eigensolver concurrence
  /// in the Werner/MEMS self-consistency cases.
  double consistency_tolerance = 1e-6;
  double werner_rb = 0.8;
  double mems_gamma = 0.8;
};

/// Parses "q=0,r=0" style slice descriptions. Throws ConfigError.
std::map<std::string, double> parse_slice(const std::string& text);

struct GridPoint {
  double p = 0.0, q = 0.0, r = 0.0, eta = 0.0;
};

struct CaseFailure {
  GridPoint at;
  double expected = 0.0;
  double actual = 0.0;
  std::string detail;
};

struct CaseReport {
  std::string name;
  long points = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::vector<CaseFailure> failures;
  bool passed() const { return failures.empty(); }
};

struct ClosedFormReport {
  std::vector<CaseReport> cases;
  bool passed() const;
  std::string to_text() const;
};

ClosedFormReport verify_closed_forms(const ClosedFormGrid& grid);

}  // namespace cadwmr
