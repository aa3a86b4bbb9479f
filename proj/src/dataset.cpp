#include "cadwmr/dataset.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "cadwmr/errors.hpp"
#include "cadwmr/sweep.hpp"
#include "cadwmr/text.hpp"

namespace cadwmr {

std::string_view scenario_name(Scenario s) {
  return s == Scenario::NoWmr ? "no_wmr" : "wmr_two_qubit";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "no_wmr") return Scenario::NoWmr;
  if (name == "wmr_two_qubit") return Scenario::WmrTwoQubit;
  throw ConfigError("unknown scenario '" + std::string(name) +
                    "' (expected no_wmr, wmr_two_qubit)");
}

nn::RegressionData Dataset::regression_data() const {
  nn::RegressionData d;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  d.x.resize(n, 5);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 5; ++k) d.x(i, k) = rows[i].features[k];
    d.y(i) = rows[i].target;
  }
  return d;
}

Dataset build_dataset(const StateFamily& family, Scenario scenario, double eta, int points,
                      const OptimizerConfig& optimizer, bool parallel) {
  if (points < 50) throw ConfigError("a training dataset needs at least 50 points");
  SweepConfig cfg;
  cfg.family = family;
  cfg.eta = eta;
  cfg.points = points;
  cfg.normalized = false;
  cfg.optimizer = optimizer;
  if (scenario == Scenario::NoWmr) {
    cfg.mode = WmrMode::None;
    cfg.variable = SweepVariable::P;
  } else {
    cfg.mode = WmrMode::TwoQubit;
    cfg.variable = SweepVariable::Q;
    cfg.p = 0.5;
  }
  const SweepTable table = run_sweep(cfg, parallel);

  Dataset data;
  data.scenario = scenario;
  data.eta = eta;
  data.sweep_var = std::string(sweep_variable_name(cfg.variable));
  data.rows.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const CorrelationVector& v = table.rows[i].raw;
    if (!v.tdd) throw UnsupportedStateError("dataset row without a discord value");
    DatasetRow row;
    row.sweep_value = table.values[i];
    row.features = {v.jsd, v.concurrence, v.fidelity, *v.qs, v.chi};
    row.target = *v.tdd;
    for (double f : row.features)
      if (!std::isfinite(f)) throw NumericalError("non-finite feature in dataset");
    data.rows.push_back(row);
  }
  return data;
}

void write_dataset_csv(std::ostream& os, const Dataset& data) {
  os << "scenario,eta,sweep_var,sweep_value,jsd,concurrence,fidelity,qs,chi,tdd\n";
  const std::string head =
      std::string(scenario_name(data.scenario)) + ',' + format_double(data.eta) + ',' + data.sweep_var;
  for (const DatasetRow& r : data.rows) {
    os << head << ',' << format_double(r.sweep_value);
    for (double f : r.features) os << ',' << format_double(f);
    os << ',' << format_double(r.target) << '\n';
  }
}

namespace {

constexpr std::array<const char*, 10> kColumns = {"scenario", "eta", "sweep_var", "sweep_value",
                                                  "jsd", "concurrence", "fidelity", "qs",
                                                  "chi", "tdd"};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string where(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col + 1) + " (" +
         kColumns[col] + ")";
}

double parse_number(const std::string& s, std::size_t row, std::size_t col) {
  double v = 0.0;
  if (!parse_double(s, v) || !std::isfinite(v)) {
    throw ParseError(where(row, col) + ": expected a finite number, got '" + s + "'");
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("row 1: missing header");
  const std::vector<std::string> header = split_fields(line);
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (c >= header.size() || header[c] != kColumns[c]) {
      throw ParseError("row 1, column " + std::to_string(c + 1) + ": expected header '" +
                       kColumns[c] + "'");
    }
  }
  if (header.size() != kColumns.size()) {
    throw ParseError("row 1: expected " + std::to_string(kColumns.size()) + " columns");
  }

  Dataset data;
  std::size_t row = 1;
  bool first = true;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != kColumns.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(kColumns.size()) + " fields, found " +
                       std::to_string(f.size()));
    }
    Scenario sc;
    try {
      sc = parse_scenario(f[0]);
    } catch (const ConfigError&) {
      throw ParseError(where(row, 0) + ": unknown scenario '" + f[0] + "'");
    }
    const double eta = parse_number(f[1], row, 1);
    if (first) {
      data.scenario = sc;
      data.eta = eta;
      data.sweep_var = f[2];
      first = false;
    } else if (sc != data.scenario || eta != data.eta || f[2] != data.sweep_var) {
      throw ParseError("row " + std::to_string(row) + ": scenario metadata differs from row 2");
    }
    DatasetRow r;
    r.sweep_value = parse_number(f[3], row, 3);
    for (std::size_t k = 0; k < 5; ++k) r.features[k] = parse_number(f[4 + k], row, 4 + k);
    r.target = parse_number(f[9], row, 9);
    data.rows.push_back(r);
  }
  if (data.rows.empty()) throw ParseError("dataset has no data rows");
  return data;
}

}  // namespace cadwmr
