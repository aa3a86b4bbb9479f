#include "cadwmr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <sstream>

#include "cadwmr/channel.hpp"
#include "cadwmr/errors.hpp"
#include "cadwmr/measures.hpp"
#include "cadwmr/oracles.hpp"
#include "cadwmr/sweep.hpp"
#include "cadwmr/text.hpp"

namespace cadwmr {

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  int failed = 0;
  for (const CheckResult& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.group << '/' << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
    failed += c.passed ? 0 : 1;
  }
  os << checks.size() - failed << '/' << checks.size() << " checks passed\n";
  return os.str();
}

bool DominanceReport::strict_holds() const {
  if (strict.empty()) return false;
  return std::all_of(strict.begin(), strict.end(), [&](const DominancePoint& d) {
    return d.c_two - d.c_one > strict_margin && d.c_one - d.c_none > strict_margin;
  });
}

namespace {

using oracle::Rng;

std::string fmt(double v) { return format_double(v); }

double min_eigenvalue(const DensityMatrix4& rho) { return hermitian_eigenvalues(rho.matrix()).values[3]; }

DensityMatrix4 conjugate(const DensityMatrix4& rho, const Matrix4c& u) {
  return DensityMatrix4(u * rho.matrix() * u.adjoint());
}

// Runs a check body; exceptions become failures carrying their message.
void run_check(VerifyReport& report, const std::string& group, const std::string& name,
               const std::function<bool(std::string&)>& body) {
  CheckResult r{group, name, false, ""};
  try {
    r.passed = body(r.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  report.checks.push_back(std::move(r));
}

// Single-qubit Clifford group (24 elements up to global phase), generated from H and S.
std::vector<Matrix2c> clifford_group() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix2c h, ph;
  h << s, s, s, -s;
  ph << 1, 0, 0, Complex(0, 1);
  auto same_up_to_phase = [](const Matrix2c& a, const Matrix2c& b) {
    return std::abs(std::abs((a.adjoint() * b).trace()) - 2.0) < 1e-9;
  };
  std::vector<Matrix2c> group{Matrix2c::Identity()};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const Matrix2c& g : {h, ph}) {
      const Matrix2c c = g * group[i];
      const bool known = std::any_of(group.begin(), group.end(),
                                     [&](const Matrix2c& x) { return same_up_to_phase(x, c); });
      if (!known) group.push_back(c);
    }
  }
  return group;
}

void closed_form_checks(VerifyReport& report, const VerifyOptions& opt) {
  const ClosedFormReport cf = verify_closed_forms(opt.grid);
  for (const CaseReport& c : cf.cases) {
    std::ostringstream d;
    d << c.points << " points, max deviation " << fmt(c.max_deviation) << " (tol " << fmt(c.tolerance) << ")";
    for (std::size_t i = 0; i < std::min<std::size_t>(c.failures.size(), 5); ++i) {
      const CaseFailure& f = c.failures[i];
      d << "; at p=" << fmt(f.at.p) << " q=" << fmt(f.at.q) << " r=" << fmt(f.at.r)
        << " eta=" << fmt(f.at.eta) << " expected " << fmt(f.expected) << " got " << fmt(f.actual);
      if (!f.detail.empty()) d << " (" << f.detail << ")";
    }
    if (c.failures.size() > 5) d << "; " << c.failures.size() - 5 << " more";
    report.checks.push_back({"closed_forms", c.name, c.passed(), d.str()});
  }
}

void channel_checks(VerifyReport& report, const VerifyOptions& opt) {
  const std::string g = "channel";
  Rng rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DensityMatrix4> states;
  std::vector<ChannelParams> params;
  std::vector<double> qs, rs;
  states.reserve(opt.random_states);
  for (int i = 0; i < opt.random_states; ++i) {
    states.push_back(oracle::random_density_matrix(rng));
    params.push_back({unit(rng), unit(rng)});
    qs.push_back(0.95 * unit(rng));
    rs.push_back(0.95 * unit(rng));
  }

  run_check(report, g, "trace_preservation", [&](std::string& d) {
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      worst = std::max(worst, std::abs(apply_ad_uncorrelated(states[i], params[i].p).trace() - 1.0));
      worst = std::max(worst, std::abs(apply_cad(states[i], params[i]).trace() - 1.0));
    }
    d = std::to_string(states.size()) + " states, max |Tr - 1| " + fmt(worst);
    return worst <= 1e-12;
  });

  run_check(report, g, "positivity", [&](std::string& d) {
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      worst = std::min(worst, min_eigenvalue(apply_ad_uncorrelated(states[i], params[i].p)));
      worst = std::min(worst, min_eigenvalue(apply_cad(states[i], params[i])));
      for (WmrMode m : {WmrMode::OneQubit, WmrMode::TwoQubit}) {
        worst = std::min(worst, min_eigenvalue(wmr_pipeline(states[i], params[i], {qs[i], rs[i], m}).state));
      }
    }
    d = "min eigenvalue " + fmt(worst);
    return worst >= -1e-10;
  });

  run_check(report, g, "eta0_reduction", [&](std::string& d) {
    double worst = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double p = params[i].p;
      worst = std::max(worst, max_abs_diff(apply_cad(states[i], {p, 0.0}).matrix(),
                                           apply_ad_uncorrelated(states[i], p).matrix()));
    }
    d = "max entry deviation " + fmt(worst);
    return worst <= 1e-12;
  });

  run_check(report, g, "measurement_free_composition", [&](std::string& d) {
    long mismatches = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (WmrMode m : {WmrMode::None, WmrMode::OneQubit, WmrMode::TwoQubit}) {
        const PipelineOutput out = wmr_pipeline(states[i], params[i], {0.0, 0.0, m});
        if (max_abs_diff(out.state.matrix(), apply_cad(states[i], params[i]).matrix()) != 0.0 ||
            out.success_probability != 1.0) {
          ++mismatches;
        }
      }
    }
    d = std::to_string(mismatches) + " inexact outputs";
    return mismatches == 0;
  });

  run_check(report, g, "x_closure", [&](std::string& d) {
    long broken = 0;
    const int n = std::min(opt.random_states, 2000);
    for (int i = 0; i < n; ++i) {
      const DensityMatrix4 x = oracle::random_x_state(rng);
      const ChannelParams ch{unit(rng), unit(rng)};
      const double q = 0.95 * unit(rng), r = 0.95 * unit(rng);
      std::vector<DensityMatrix4> outs{apply_ad_uncorrelated(x, ch.p), apply_cad(x, ch)};
      for (WmrMode m : {WmrMode::OneQubit, WmrMode::TwoQubit}) {
        outs.push_back(apply_wm(x, q, m).state);
        outs.push_back(apply_qmr(x, r, m).state);
        outs.push_back(wmr_pipeline(x, ch, {q, r, m}).state);
      }
      for (const DensityMatrix4& o : outs) broken += is_x_state(o, 1e-10) ? 0 : 1;
    }
    d = std::to_string(n) + " X-states, " + std::to_string(broken) + " non-X outputs";
    return broken == 0;
  });

  run_check(report, g, "full_decay", [&](std::string& d) {
    const DensityMatrix4 ground = DensityMatrix4::basis(0);
    double worst = 0.0;
    for (const DensityMatrix4& s : states) {
      worst = std::max(worst, max_abs_diff(apply_cad(s, {1.0, 0.0}).matrix(), ground.matrix()));
    }
    const DensityMatrix4 bell = make_state(StateFamily::bell());
    for (double eta : {0.0, 1.0}) {
      worst = std::max(worst, max_abs_diff(apply_cad(bell, {1.0, eta}).matrix(), ground.matrix()));
    }
    d = "max deviation from |00><00| " + fmt(worst);
    return worst <= 1e-12;
  });
}

void measure_checks(VerifyReport& report, const VerifyOptions& opt) {
  const std::string g = "measures";
  Rng rng(opt.seed + 1);

  run_check(report, g, "local_unitary_invariance", [&](std::string& d) {
    double worst = 0.0;
    for (int i = 0; i < opt.unitaries; ++i) {
      const DensityMatrix4 rho = oracle::random_density_matrix(rng);
      const Matrix4c uv = kron(oracle::random_unitary2(rng), oracle::random_unitary2(rng));
      const DensityMatrix4 t = conjugate(rho, uv);
      worst = std::max({worst, std::abs(concurrence(rho) - concurrence(t)),
                        std::abs(teleportation_fidelity(rho) - teleportation_fidelity(t)),
                        std::abs(dense_coding_capacity(rho) - dense_coding_capacity(t))});
    }
    d = "concurrence, fidelity, chi over " + std::to_string(opt.unitaries) +
        " random u x v; max change " + fmt(worst);
    return worst <= 1e-8;
  });

  run_check(report, g, "discord_oracle_local_unitary_invariance", [&](std::string& d) {
    double worst = 0.0;
    const oracle::GridSpec coarse{36, 72};
    const int n = std::max(1, opt.unitaries / 10);
    for (int i = 0; i < n; ++i) {
      const DensityMatrix4 x = oracle::random_x_state(rng);
      const DensityMatrix4 t = conjugate(x, kron(oracle::random_unitary2(rng), oracle::random_unitary2(rng)));
      worst = std::max(worst, std::abs(oracle::trace_distance_discord_oracle(x, coarse).value -
                                       oracle::trace_distance_discord_oracle(t, coarse).value));
    }
    d = std::to_string(n) + " random u x v; max change " + fmt(worst);
    return worst <= 1e-8;
  });

  run_check(report, g, "steering_oracle_clifford_invariance", [&](std::string& d) {
    const std::vector<Matrix2c> cliffords = clifford_group();
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const DensityMatrix4 rho = oracle::random_density_matrix(rng);
      const double base = oracle::steering_from_conditional_entropies(rho);
      for (const Matrix2c& u : cliffords) {
        const DensityMatrix4 t = conjugate(rho, kron(u, u.conjugate()));
        worst = std::max(worst, std::abs(oracle::steering_from_conditional_entropies(t) - base));
      }
    }
    d = std::to_string(cliffords.size()) + " Cliffords u x conj(u); max change " + fmt(worst);
    return cliffords.size() == 24 && worst <= 1e-8;
  });

  run_check(report, g, "steering_closed_form_vs_oracle", [&](std::string& d) {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const DensityMatrix4 x = oracle::random_x_state(rng);
      const double m = 1.0 - steering_coefficients(x).r_marg;
      const double marginal = m > 0.0 ? 2.0 * m * std::log2(m) : 0.0;
      worst = std::max(worst, std::abs(epr_steering(x) - marginal -
                                       oracle::steering_from_conditional_entropies(x)));
    }
    d = "500 random X-states, max |QS - 2(1-r)log2(1-r) - oracle| " + fmt(worst);
    return worst <= 1e-9;
  });

  run_check(report, g, "pure_state_concurrence", [&](std::string& d) {
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double a2 = k / 100.0;
      const DensityMatrix4 rho = make_state(StateFamily::nme(a2));
      worst = std::max(worst, std::abs(concurrence(rho) - 2.0 * std::sqrt(a2 * (1.0 - a2))));
    }
    d = "101-point alpha^2 grid, max deviation " + fmt(worst);
    return worst <= 1e-10;
  });

  run_check(report, g, "discord_oracle_proportionality", [&](std::string& d) {
    const oracle::GridSpec grid{60, 120};
    double lo = 1e300, hi = -1e300;
    int used = 0;
    while (used < opt.tdd_states) {
      const DensityMatrix4 x = oracle::random_x_state(rng);
      const double closed = trace_distance_discord(x);
      if (closed < 1e-6) continue;
      const double ratio = oracle::trace_distance_discord_oracle(x, grid).value / closed;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ++used;
    }
    d = std::to_string(used) + " X-states, oracle/closed in [" + fmt(lo) + ", " + fmt(hi) + "]";
    return hi - lo <= 1e-6;
  });

  run_check(report, g, "discord_degenerate_branch_continuity", [&](std::string& d) {
    double worst = 0.0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double rb = unit(rng);
      const DensityMatrix4 w = make_state(StateFamily::werner(rb));
      Matrix4c m = w.matrix();
      const double eps = 1e-6;
      m(0, 0) += eps;
      m(1, 1) -= eps;
      m(0, 3) += eps;
      m(3, 0) += eps;
      worst = std::max(worst, std::abs(trace_distance_discord(DensityMatrix4(m)) - trace_distance_discord(w)));
    }
    d = "200 Werner states perturbed by 1e-6, max change " + fmt(worst);
    return worst < 1e-4;
  });

  run_check(report, g, "normalization_monotone", [&](std::string& d) {
    const NormalizationTable t = NormalizationTable::standard();
    long bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const CorrelationVector a = correlation_vector(oracle::random_x_state(rng));
      const CorrelationVector b = correlation_vector(oracle::random_x_state(rng));
      const CorrelationVector na = normalize(a, t), nb = normalize(b, t);
      for (Measure m : kAllMeasures) {
        if ((*a.get(m) < *b.get(m)) != (*na.get(m) < *nb.get(m))) ++bad;
      }
    }
    d = std::to_string(bad) + " order reversals";
    return bad == 0;
  });

  run_check(report, g, "hierarchy_crossings", [&](std::string& d) {
    SweepConfig cfg;
    cfg.family = StateFamily::bell();
    cfg.points = 2001;
    const SweepTable table = run_sweep(cfg, opt.parallel);
    const NormalizationTable t = NormalizationTable::standard();
    std::vector<double> nqs, nc;
    bool tdd_ok = true;
    for (const PointResult& r : table.rows) {
      const CorrelationVector n = normalize(r.raw, t);
      nqs.push_back(*n.qs);
      nc.push_back(n.concurrence);
      if (n.concurrence > 0.0 && !(*n.tdd > 0.0)) tdd_ok = false;
    }
    const std::vector<double> qs_cross = zero_crossings(table.values, nqs);
    const std::vector<double> c_cross = zero_crossings(table.values, nc);
    const double p_qs = qs_cross.empty() ? 1.0 : qs_cross.front();
    const double p_c = c_cross.empty() ? 1.0 : c_cross.front();
    d = "N[QS] crosses at p=" + fmt(p_qs) + ", N[C] at p=" + fmt(p_c) +
        (tdd_ok ? "; N[TDD] > 0 wherever N[C] > 0" : "; N[TDD] vanishes where N[C] > 0");
    return !qs_cross.empty() && p_qs < p_c && tdd_ok;
  });
}

void optimizer_checks(VerifyReport& report) {
  const std::string g = "optimizer";
  const OptimizerConfig oc;

  run_check(report, g, "memory_dominance_bell", [&](std::string& d) {
    const DensityMatrix4 bell = make_state(StateFamily::bell());
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double p = k / 100.0;
      worst = std::min(worst, concurrence(apply_cad(bell, {p, 1.0})) - concurrence(apply_cad(bell, {p, 0.0})));
    }
    d = "101 p values, min C(eta=1) - C(eta=0) " + fmt(worst);
    return worst >= -1e-9;
  });

  run_check(report, g, "refinement_soundness", [&](std::string& d) {
    long cases = 0, bad = 0;
    double worst = 0.0;
    for (const StateFamily& f : {StateFamily::bell(), StateFamily::werner(0.8), StateFamily::mems(0.8)}) {
      const DensityMatrix4 rho = make_state(f);
      for (double p : {0.3, 0.7}) {
        for (double q : {0.3, 0.8}) {
          for (double eta : {0.0, 1.0}) {
            for (WmrMode m : {WmrMode::OneQubit, WmrMode::TwoQubit}) {
              const OptimizationResult res = optimal_qmr(rho, {p, eta}, q, m, oc);
              double grid_best = -1.0;
              for (long k = 0;; ++k) {
                const double r = std::min(k * oc.grid_step, oc.r_max);
                const double c = pipeline_concurrence(rho, {p, eta}, q, r, m);
                if (std::isfinite(c)) grid_best = std::max(grid_best, c);
                if (r >= oc.r_max) break;
              }
              const double gap = res.concurrence_at_star - grid_best;
              const double lo = std::max(0.0, res.r_star - oc.grid_step);
              const double hi = std::min(oc.r_max, res.r_star + oc.grid_step);
              const double c0 = pipeline_concurrence(rho, {p, eta}, q, 0.0, m);
              const double neighbours = std::max({c0, pipeline_concurrence(rho, {p, eta}, q, lo, m),
                                                  pipeline_concurrence(rho, {p, eta}, q, hi, m)});
              worst = std::min(worst, gap);
              if (gap < -1e-12 || res.concurrence_at_star < neighbours - 1e-10) ++bad;
              ++cases;
            }
          }
        }
      }
    }
    d = std::to_string(cases) + " cases, min (refined - best grid) " + fmt(worst) + ", " +
        std::to_string(bad) + " unsound";
    return bad == 0;
  });
}

void dominance_checks(VerifyReport& report, const VerifyOptions& opt) {
  const DominanceReport dom = wmr_dominance(1e-9, {}, opt.parallel);
  std::ostringstream d;
  d << dom.points.size() << " grid points, " << dom.violations.size() << " ordering violations";
  for (const DominancePoint& v : dom.violations) {
    d << "; " << v.family.name() << " p=" << fmt(v.p) << " q=" << fmt(v.q) << " eta=" << fmt(v.eta)
      << " C(none)=" << fmt(v.c_none) << " C(wm1)=" << fmt(v.c_one) << " C(wm2)=" << fmt(v.c_two);
  }
  report.checks.push_back({"dominance", "two_qubit_ge_one_qubit_ge_none", dom.ordering_holds(), d.str()});

  std::ostringstream s;
  s << "margin " << fmt(dom.strict_margin);
  for (const DominancePoint& v : dom.strict) {
    s << "; " << v.family.name() << " eta=" << fmt(v.eta) << " C(wm2)-C(wm1)=" << fmt(v.c_two - v.c_one)
      << " C(wm1)-C(none)=" << fmt(v.c_one - v.c_none);
  }
  report.checks.push_back({"dominance", "strict_improvement_p0.5_q0.8", dom.strict_holds(), s.str()});
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options) {
  for (const std::string& g : options.groups) {
    if (std::find(kVerifyGroups.begin(), kVerifyGroups.end(), g) == kVerifyGroups.end()) {
      throw ConfigError("unknown verification group '" + g + "'");
    }
  }
  VerifyReport report;
  auto wanted = [&](const char* g) { return options.groups.count(g) > 0; };
  if (wanted("closed_forms")) closed_form_checks(report, options);
  if (wanted("channel")) channel_checks(report, options);
  if (wanted("measures")) measure_checks(report, options);
  if (wanted("optimizer")) optimizer_checks(report);
  if (wanted("dominance")) dominance_checks(report, options);
  return report;
}

DominanceReport wmr_dominance(double tolerance, const OptimizerConfig& optimizer, bool parallel) {
  DominanceReport out;
  out.tolerance = tolerance;
  std::vector<DominancePoint> grid;
  for (const StateFamily& f : {StateFamily::bell(), StateFamily::werner(0.8), StateFamily::mems(0.8)}) {
    for (double eta : {0.0, 1.0}) {
      for (int i = 1; i <= 9; ++i) {
        for (int j = 1; j <= 9; ++j) {
          DominancePoint pt;
          pt.family = f;
          pt.p = i / 10.0;
          pt.q = j / 10.0;
          pt.eta = eta;
          grid.push_back(pt);
        }
      }
    }
  }
  // Three evaluations per grid point; flatten them into one parallel map.
  std::vector<PointSpec> specs;
  for (const DominancePoint& pt : grid) {
    for (WmrMode m : {WmrMode::None, WmrMode::OneQubit, WmrMode::TwoQubit}) {
      PointSpec s;
      s.family = pt.family;
      s.channel = {pt.p, pt.eta};
      s.q = m == WmrMode::None ? 0.0 : pt.q;
      s.mode = m;
      s.optimize_r = m != WmrMode::None;
      specs.push_back(s);
    }
  }
  const std::vector<PointResult> res =
      parallel ? evaluate_points_parallel(specs, optimizer) : evaluate_points_serial(specs, optimizer);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    DominancePoint pt = grid[k];
    pt.c_none = res[3 * k].raw.concurrence;
    pt.c_one = res[3 * k + 1].raw.concurrence;
    pt.c_two = res[3 * k + 2].raw.concurrence;
    out.points.push_back(pt);
    if (pt.c_two < pt.c_one - tolerance || pt.c_one < pt.c_none - tolerance) out.violations.push_back(pt);
    if (std::abs(pt.p - 0.5) < 1e-12 && std::abs(pt.q - 0.8) < 1e-12) out.strict.push_back(pt);
  }
  return out;
}

}  // namespace cadwmr
