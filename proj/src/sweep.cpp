#include "cadwmr/sweep.hpp"

#include <exception>
#include <ostream>

#include "cadwmr/errors.hpp"
#include "cadwmr/text.hpp"

namespace cadwmr {

PointResult evaluate_point(const PointSpec& spec, const OptimizerConfig& optimizer) {
  const DensityMatrix4 rho = make_state(spec.family);
  PointResult out;
  double r = spec.r;
  if (spec.optimize_r && spec.mode != WmrMode::None) {
    const OptimizationResult opt = optimal_qmr(rho, spec.channel, spec.q, spec.mode, optimizer);
    r = opt.r_star;
    out.r_star = r;
  }
  const PipelineOutput pipe = wmr_pipeline(rho, spec.channel, {spec.q, r, spec.mode});
  out.raw = correlation_vector(pipe.state);
  out.success_probability = pipe.success_probability;
  return out;
}

std::vector<PointResult> evaluate_points_serial(std::span<const PointSpec> specs,
                                                const OptimizerConfig& optimizer) {
  std::vector<PointResult> out;
  out.reserve(specs.size());
  for (const PointSpec& s : specs) out.push_back(evaluate_point(s, optimizer));
  return out;
}

std::vector<PointResult> evaluate_points_parallel(std::span<const PointSpec> specs,
                                                  const OptimizerConfig& optimizer) {
  const long n = static_cast<long>(specs.size());
  std::vector<PointResult> out(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = evaluate_point(specs[i], optimizer);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "p") return SweepVariable::P;
  if (name == "q") return SweepVariable::Q;
  if (name == "alpha2") return SweepVariable::Alpha2;
  throw ConfigError("unknown sweep variable '" + std::string(name) + "' (expected p, q, alpha2)");
}

std::string_view sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::P: return "p";
    case SweepVariable::Q: return "q";
    case SweepVariable::Alpha2: return "alpha2";
  }
  return "unknown";
}

void SweepConfig::validate() const {
  if (points < 2) throw ConfigError("a sweep needs at least 2 points");
  ChannelParams{p, eta}.validate();
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("q must lie in [0, 1)");
  if (!(q_max > 0.0 && q_max < 1.0)) throw DomainError("q_max must lie in (0, 1)");
  if (variable == SweepVariable::Q && mode == WmrMode::None) {
    throw ConfigError("sweeping q requires a WMR mode (wm1 or wm2)");
  }
  if (variable == SweepVariable::Alpha2 && family.kind != FamilyKind::Nme) {
    throw ConfigError("sweeping alpha2 requires the nme family");
  }
  if (variable != SweepVariable::Alpha2) make_state(family);  // parameter range check
}

std::vector<PointSpec> sweep_points(const SweepConfig& config, std::vector<double>* values) {
  config.validate();
  std::vector<PointSpec> specs;
  specs.reserve(config.points);
  if (values) values->clear();
  const bool reversal = config.mode != WmrMode::None;
  for (int i = 0; i < config.points; ++i) {
    const double t = static_cast<double>(i) / (config.points - 1);
    PointSpec s;
    s.family = config.family;
    s.channel = {config.p, config.eta};
    s.q = reversal ? config.q : 0.0;
    s.mode = config.mode;
    s.optimize_r = reversal;
    double v = 0.0;
    switch (config.variable) {
      case SweepVariable::P:
        v = t;
        s.channel.p = v;
        break;
      case SweepVariable::Q:
        v = config.q_max * t;
        s.q = v;
        break;
      case SweepVariable::Alpha2:
        v = t;
        s.family = StateFamily::nme(v);
        break;
    }
    specs.push_back(s);
    if (values) values->push_back(v);
  }
  return specs;
}

SweepTable run_sweep(const SweepConfig& config, bool parallel) {
  SweepTable table;
  table.variable = config.variable;
  table.normalized = config.normalized;
  table.with_reversal = config.mode != WmrMode::None;
  const std::vector<PointSpec> specs = sweep_points(config, &table.values);
  table.rows = parallel ? evaluate_points_parallel(specs, config.optimizer)
                        : evaluate_points_serial(specs, config.optimizer);
  return table;
}

std::string sweep_csv_header(bool normalized, bool with_reversal) {
  std::string h = "sweep_var,value";
  for (Measure m : kAllMeasures) h += "," + std::string(measure_name(m));
  if (normalized) {
    for (Measure m : kAllMeasures) h += ",n_" + std::string(measure_name(m));
  }
  if (with_reversal) h += ",r_star,success_prob";
  return h;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepTable& table, const NormalizationTable& norm) {
  os << sweep_csv_header(table.normalized, table.with_reversal) << '\n';
  const std::string var(sweep_variable_name(table.variable));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const PointResult& row = table.rows[i];
    os << var << ',' << format_double(table.values[i]);
    for (Measure m : kAllMeasures) os << ',' << cell(row.raw.get(m));
    if (table.normalized) {
      const CorrelationVector n = normalize(row.raw, norm);
      for (Measure m : kAllMeasures) os << ',' << cell(n.get(m));
    }
    if (table.with_reversal) {
      os << ',' << cell(row.r_star) << ',' << format_double(row.success_probability);
    }
    os << '\n';
  }
}

std::vector<double> zero_crossings(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ConfigError("zero_crossings: size mismatch");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    const bool a = ys[i] > 0.0;
    const bool b = ys[i + 1] > 0.0;
    if (a == b) continue;
    const double dy = ys[i + 1] - ys[i];
    out.push_back(dy == 0.0 ? xs[i] : xs[i] - ys[i] * (xs[i + 1] - xs[i]) / dy);
  }
  return out;
}

}  // namespace cadwmr
