#include "cadwmr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cadwmr/errors.hpp"
#include "cadwmr/measures.hpp"
#include "cadwmr/text.hpp"

namespace cadwmr {

GoldenResult golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                     double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  long evals = 2;
  while (b - a > tol) {
    // >= keeps the left interval on ties, which favours the smaller argument
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  if (fc >= fd) return {c, fc, evals};
  return {d, fd, evals};
}

double pipeline_concurrence(const DensityMatrix4& rho, const ChannelParams& channel, double q,
                            double r, WmrMode mode) {
  try {
    return concurrence(wmr_pipeline(rho, channel, {q, r, mode}).state);
  } catch (const DegenerateMeasurementError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

OptimizationResult optimal_qmr(const DensityMatrix4& rho, const ChannelParams& channel, double q,
                               WmrMode mode, const OptimizerConfig& config) {
  channel.validate();
  if (mode == WmrMode::None) throw DomainError("optimal_qmr requires a WMR mode");
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("weak-measurement strength q must lie in [0, 1)");
  if (!(config.grid_step > 0.0) || !(config.r_max > 0.0 && config.r_max < 1.0)) {
    throw ConfigError("optimizer grid step must be positive and r_max in (0, 1)");
  }

  std::vector<double> grid;
  for (long k = 0;; ++k) {
    const double r = static_cast<double>(k) * config.grid_step;
    if (r >= config.r_max) break;
    grid.push_back(r);
  }
  grid.push_back(config.r_max);

  long evals = 0;
  auto objective = [&](double r) {
    ++evals;
    return pipeline_concurrence(rho, channel, q, r, mode);
  };

  std::vector<double> values(grid.size());
  int best = -1;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    values[k] = objective(grid[k]);
    if (std::isnan(values[k])) continue;
    if (best < 0 || values[k] > values[best]) best = static_cast<int>(k);
  }
  if (best < 0) throw OptimizationError("pipeline is degenerate for every candidate r");

  double r_star = grid[best];
  double c_star = values[best];

  const bool plateau = c_star <= 0.0;
  if (!plateau) {
    const double lo = grid[best > 0 ? best - 1 : 0];
    const double hi = grid[std::min<std::size_t>(best + 1, grid.size() - 1)];
    // NaN (degenerate) points inside the bracket must never win
    auto guarded = [&](double r) {
      const double v = objective(r);
      return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
    };
    const GoldenResult refined = golden_section_maximize(guarded, lo, hi, config.tolerance);
    if (refined.fx > c_star || (refined.fx == c_star && refined.x < r_star)) {
      r_star = refined.x;
      c_star = refined.fx;
    }
  }

  const PipelineOutput out = wmr_pipeline(rho, channel, {q, r_star, mode});
  ++evals;
  return {r_star, c_star, out.success_probability, evals};
}

OptimizationResult optimal_qmr(const StateFamily& family, const ChannelParams& channel, double q,
                               WmrMode mode, const OptimizerConfig& config) {
  return optimal_qmr(make_state(family), channel, q, mode, config);
}

double closed_form_concurrence_bell(double p, double q, double r, double eta, WmrMode mode) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("closed form needs eta in [0, 1]");
  for (double v : {p, q, r}) {
    if (!(v >= 0.0 && v < 1.0)) {
      throw DomainError("closed form needs p, q, r in [0, 1)");
    }
  }
  const double pb = 1.0 - p, qb = 1.0 - q, rb = 1.0 - r;
  // primed complements: p - 1, q - 1, r - 1
  const double pbp = p - 1.0, qbp = q - 1.0, rbp = r - 1.0;
  const double ap = std::abs(p);
  const double kappa = std::abs(eta * p - p - eta + eta * std::sqrt(pb) + 1.0);
  const double mixed = eta * ap - ap + p * ap + q * ap - eta * p * ap - eta * q * ap - p * q * ap +
                       eta * p * q * ap;

  if (mode == WmrMode::OneQubit) {
    const double s2 =
        eta * ap - eta * p * p - p * p * q + p * p + eta * p * p * q - eta * q * ap + 1.0;
    const double qm2 = q - 2.0;
    const double s1 = std::abs(rbp * s2 / qm2 - (eta - 1.0) * pbp * pbp * qbp / qm2 -
                               eta * pbp * qbp / qm2 + ap * (eta - 1.0) * pbp * qbp / qm2 -
                               ap * (eta - 1.0) * pbp * qbp * rbp / qm2) *
                      qm2;
    const double t1 = -std::sqrt(rb) * (mixed + kappa * std::sqrt(qb)) / s1;
    const double t2 = std::sqrt((pb + eta * p) * s2) * std::sqrt(pb) * std::sqrt(qb) *
                      std::sqrt(rb) / s1;
    return 2.0 * std::max({0.0, t1, t2});
  }
  if (mode == WmrMode::TwoQubit) {
    const double s3 = -0.5 + q / 2.0;
    const double s4 = 2.0 - 2.0 * q + q * q;
    const double s2 = (eta - 1.0) * (1.0 + p * p - 2.0 * p * p * q + p * p * q * q) / s4 -
                      eta * (ap + q * q * ap - 2.0 * q * ap + 1.0) / s4;
    const double s1 = std::abs(-s2 * rbp * rbp - 2.0 * s3 * (eta - 1.0) * pbp * pbp * qbp / s4 -
                               2.0 * eta * s3 * pbp * qbp / s4 -
                               4.0 * ap * s3 * (eta - 1.0) * pbp * qbp * rbp / s4);
    const double t1 = qbp * rbp * (kappa + mixed) / (s1 * s4);
    const double t2 =
        -std::sqrt(-s2 * (pb + eta * p)) * std::sqrt(pb) * qbp * rbp / (s1 * std::sqrt(s4));
    return 2.0 * std::max({0.0, t1, t2});
  }
  throw DomainError("closed form is defined for the wm1 and wm2 protocols only");
}

namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

std::map<std::string, double> parse_slice(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trimmed(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("slice entry '" + item + "' lacks '='");
    const std::string key = trimmed(item.substr(0, eq));
    if (key != "p" && key != "q" && key != "r" && key != "eta") {
      throw ConfigError("slice key must be one of p, q, r, eta (got '" + key + "')");
    }
    double v = 0.0;
    if (!parse_double(trimmed(item.substr(eq + 1)), v)) {
      throw ConfigError("slice value in '" + item + "' is not a number");
    }
    out[key] = v;
  }
  return out;
}

bool ClosedFormReport::passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseReport& c) { return c.passed(); });
}

std::string ClosedFormReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : cases) {
    os << (c.passed() ? "PASS " : "FAIL ") << c.name << ": points=" << c.points
       << " max_dev=" << format_double(c.max_deviation) << " tol=" << format_double(c.tolerance)
       << '\n';
    const std::size_t shown = std::min<std::size_t>(c.failures.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& f = c.failures[i];
      os << "    p=" << format_double(f.at.p) << " q=" << format_double(f.at.q)
         << " r=" << format_double(f.at.r) << " eta=" << format_double(f.at.eta)
         << " expected=" << format_double(f.expected) << " actual=" << format_double(f.actual);
      if (!f.detail.empty()) os << " (" << f.detail << ')';
      os << '\n';
    }
    if (c.failures.size() > shown) {
      os << "    ... " << (c.failures.size() - shown) << " more\n";
    }
  }
  return os.str();
}

namespace {

std::vector<double> axis_values(const ClosedFormGrid& grid, const std::string& key) {
  if (auto it = grid.slice.find(key); it != grid.slice.end()) return {it->second};
  std::vector<double> v;
  const int n = std::max(grid.points_per_axis, 1);
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? 0.0 : grid.axis_max * i / (n - 1));
  return v;
}

template <typename Fn>
void for_each_point(const ClosedFormGrid& grid, Fn&& fn) {
  for (double p : axis_values(grid, "p"))
    for (double q : axis_values(grid, "q"))
      for (double r : axis_values(grid, "r"))
        for (double eta : axis_values(grid, "eta")) fn(GridPoint{p, q, r, eta});
}

void record(CaseReport& report, const GridPoint& at, double expected, double actual,
            std::string detail = {}) {
  ++report.points;
  const double dev = std::abs(expected - actual);
  if (std::isnan(dev)) {
    report.max_deviation = std::numeric_limits<double>::infinity();
  } else {
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  if (!(dev <= report.tolerance)) report.failures.push_back({at, expected, actual, std::move(detail)});
}

}  // namespace

ClosedFormReport verify_closed_forms(const ClosedFormGrid& grid) {
  ClosedFormReport report;
  const DensityMatrix4 bell = make_state(StateFamily::bell());
  const bool measurement_free = grid.slice.count("q") && grid.slice.at("q") == 0.0 &&
                                grid.slice.count("r") && grid.slice.at("r") == 0.0;

  for (WmrMode mode : {WmrMode::OneQubit, WmrMode::TwoQubit}) {
    CaseReport c{"bell/" + std::string(wmr_mode_name(mode)) + " closed form vs pipeline", 0, 0.0,
                 grid.tolerance, {}};
    CaseReport bare{"bell/" + std::string(wmr_mode_name(mode)) + " closed form vs bare CAD", 0,
                    0.0, grid.tolerance, {}};
    for_each_point(grid, [&](const GridPoint& g) {
      const double closed = closed_form_concurrence_bell(g.p, g.q, g.r, g.eta, mode);
      const double numeric =
          concurrence(wmr_pipeline(bell, {g.p, g.eta}, {g.q, g.r, mode}).state);
      record(c, g, numeric, closed);
      if (measurement_free) record(bare, g, concurrence(apply_cad(bell, {g.p, g.eta})), closed);
    });
    report.cases.push_back(std::move(c));
    if (measurement_free) report.cases.push_back(std::move(bare));
  }

  const StateFamily others[] = {StateFamily::werner(grid.werner_rb),
                                StateFamily::mems(grid.mems_gamma)};
  for (const StateFamily& family : others) {
    const DensityMatrix4 rho = make_state(family);
    for (WmrMode mode : {WmrMode::OneQubit, WmrMode::TwoQubit}) {
      CaseReport c{family.name() + "/" + std::string(wmr_mode_name(mode)) +
                       " pipeline self-consistency",
                   0, 0.0, grid.consistency_tolerance, {}};
      for_each_point(grid, [&](const GridPoint& g) {
        const PipelineOutput out = wmr_pipeline(rho, {g.p, g.eta}, {g.q, g.r, mode});
        const Spectrum s = hermitian_eigenvalues(out.state.matrix());
        const bool valid = std::abs(out.state.trace() - 1.0) <= 1e-10 && s.values[3] >= -1e-9 &&
                           is_x_state(out.state, 1e-10) && out.success_probability > 0.0 &&
                           out.success_probability <= 1.0 + 1e-12;
        const double structural = concurrence_from_spectrum(spin_flip_spectrum_x(out.state));
        const double general = concurrence_from_spectrum(spin_flip_spectrum(out.state));
        record(c, g, general, valid ? structural : std::numeric_limits<double>::quiet_NaN(),
               valid ? "" : "output violates state invariants");
      });
      report.cases.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace cadwmr
