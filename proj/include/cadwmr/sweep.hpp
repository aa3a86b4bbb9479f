#pragma once

// Parameter sweeps over the channel/WMR pipeline. Each sweep point is
// independent; the evaluation kernel exists in a serial reference form and an
// OpenMP form that must agree bit for bit.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cadwmr/channel.hpp"
#include "cadwmr/measures.hpp"
#include "cadwmr/optimizer.hpp"
#include "cadwmr/qstate.hpp"

namespace cadwmr {

/// One pipeline evaluation. When optimize_r is set, r is replaced by the
/// concurrence-optimal reversal strength for (state, channel, q, mode).
struct PointSpec {
  StateFamily family;
  ChannelParams channel;
  double q = 0.0;
  double r = 0.0;
  WmrMode mode = WmrMode::None;
  bool optimize_r = false;
};

struct PointResult {
  CorrelationVector raw;
  std::optional<double> r_star;
  double success_probability = 1.0;
};

PointResult evaluate_point(const PointSpec& spec, const OptimizerConfig& optimizer = {});

/// Reference implementation: plain loop.
std::vector<PointResult> evaluate_points_serial(std::span<const PointSpec> specs,
                                                const OptimizerConfig& optimizer = {});
/// OpenMP parallel-for over points with ordered output. If any point throws,
/// the exception of the lowest-index failing point is rethrown.
std::vector<PointResult> evaluate_points_parallel(std::span<const PointSpec> specs,
                                                  const OptimizerConfig& optimizer = {});

enum class SweepVariable { P, Q, Alpha2 };
SweepVariable parse_sweep_variable(std::string_view name);
std::string_view sweep_variable_name(SweepVariable v);

struct SweepConfig {
  StateFamily family;
  double eta = 0.0;
  WmrMode mode = WmrMode::None;
  SweepVariable variable = SweepVariable::P;
  double p = 0.5;  // fixed damping when sweeping q or alpha2
  double q = 0.5;  // fixed WM strength when sweeping p or alpha2 with a WMR mode
  double q_max = 0.99;
  int points = 201;
  bool normalized = true;
  OptimizerConfig optimizer;

  /// Throws ConfigError / DomainError on inconsistent settings.
  void validate() const;
};

struct SweepTable {
  SweepVariable variable = SweepVariable::P;
  bool normalized = true;
  bool with_reversal = false;
  std::vector<double> values;
  std::vector<PointResult> rows;
};

std::vector<PointSpec> sweep_points(const SweepConfig& config, std::vector<double>* values);

SweepTable run_sweep(const SweepConfig& config, bool parallel = true);

/// Header: sweep_var,value,chi,fidelity,concurrence,qs,tdd,jsd
/// [,n_chi,n_fidelity,n_concurrence,n_qs,n_tdd,n_jsd][,r_star,success_prob]
std::string sweep_csv_header(bool normalized, bool with_reversal);
void write_sweep_csv(std::ostream& os, const SweepTable& table,
                     const NormalizationTable& norm = NormalizationTable::standard());

/// x positions where ys changes sign between adjacent samples (strictly
/// positive vs non-positive), located by linear interpolation.
std::vector<double> zero_crossings(std::span<const double> xs, std::span<const double> ys);

}  // namespace cadwmr
