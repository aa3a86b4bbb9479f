#pragma once

// Training data for the discord regressor: raw correlation measures as
// features, trace-distance discord as target.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "cadwmr/optimizer.hpp"
#include "cadwmr/qstate.hpp"
#include "cadwmr/training.hpp"

namespace cadwmr {

enum class Scenario { NoWmr, WmrTwoQubit };

std::string_view scenario_name(Scenario s);  // no_wmr, wmr_two_qubit
Scenario parse_scenario(std::string_view name);

/// Feature order: jsd, concurrence, fidelity, qs, chi.
inline constexpr std::array<const char*, 5> kFeatureNames = {"jsd", "concurrence", "fidelity",
                                                             "qs", "chi"};

struct DatasetRow {
  double sweep_value = 0.0;
  std::array<double, 5> features{};
  double target = 0.0;  // tdd
};

struct Dataset {
  Scenario scenario = Scenario::NoWmr;
  double eta = 0.0;
  std::string sweep_var = "p";
  std::vector<DatasetRow> rows;

  nn::RegressionData regression_data() const;
};

/// NoWmr sweeps p uniformly over [0, 1]; WmrTwoQubit fixes p = 0.5 and sweeps
/// q over [0, 0.99] with the optimal reversal strength at each point.
/// Requires points >= 50.
Dataset build_dataset(const StateFamily& family, Scenario scenario, double eta, int points,
                      const OptimizerConfig& optimizer = {}, bool parallel = true);

/// Header: scenario,eta,sweep_var,sweep_value,jsd,concurrence,fidelity,qs,chi,tdd
void write_dataset_csv(std::ostream& os, const Dataset& data);
/// Throws ParseError naming the row (1-based, header is row 1) and column.
Dataset read_dataset_csv(std::istream& is);

}  // namespace cadwmr
