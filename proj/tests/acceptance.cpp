// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cadwmr/channel.hpp"
#include "cadwmr/dataset.hpp"
#include "cadwmr/measures.hpp"
#include "cadwmr/mlp.hpp"
#include "cadwmr/optimizer.hpp"
#include "cadwmr/oracles.hpp"
#include "cadwmr/qstate.hpp"
#include "cadwmr/sweep.hpp"
#include "cadwmr/text.hpp"
#include "cadwmr/training.hpp"
#include "cadwmr/verify.hpp"

using namespace cadwmr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_double(v); }

DensityMatrix4 ground() {
  Vector4c psi = Vector4c::Zero();
  psi(0) = 1.0;
  return DensityMatrix4::from_pure(psi);
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Outcome normalization_anchors() {
  const CorrelationVector b = correlation_vector(make_state(StateFamily::bell()));
  const CorrelationVector g = correlation_vector(ground());
  const bool bell_ok = near(b.chi, 2.0, 1e-9) && near(b.fidelity, 1.0, 1e-9) && near(b.concurrence, 1.0, 1e-9) &&
                       near(*b.qs, 6.0, 1e-9) && near(b.jsd, 0.56, 0.005);
  const bool ground_ok = near(g.chi, 1.0, 1e-9) && near(g.fidelity, 2.0 / 3.0, 1e-9) && near(g.concurrence, 0.0, 1e-9) &&
                         near(*g.qs, 2.0, 1e-9) && near(*g.tdd, 0.0, 1e-9) && near(g.jsd, 0.0, 1e-9);
  return {bell_ok && ground_ok, "bell jsd=" + fmt(b.jsd) + " qs=" + fmt(*b.qs) + "; |00> chi=" + fmt(g.chi) +
                                    " F=" + fmt(g.fidelity) + " qs=" + fmt(*g.qs)};
}

std::vector<double> qs_crossings(double eta) {
  SweepConfig cfg;
  cfg.eta = eta;
  cfg.points = 2001;
  const SweepTable t = run_sweep(cfg);
  const NormalizationTable norm = NormalizationTable::standard();
  std::vector<double> nqs;
  for (const PointResult& r : t.rows) nqs.push_back(*normalize(r.raw, norm).qs);
  return zero_crossings(t.values, nqs);
}

Outcome steering_thresholds() {
  const auto c0 = qs_crossings(0.0);
  const auto c1 = qs_crossings(1.0);
  const bool ok = c0.size() == 1 && c1.size() == 1 && near(c0[0], 0.25, 0.02) && near(c1[0], 0.66, 0.02);
  std::string d = "eta=0:";
  for (double c : c0) d += " " + fmt(c);
  d += "; eta=1:";
  for (double c : c1) d += " " + fmt(c);
  return {ok, d};
}

Outcome endpoint_purity() {
  const DensityMatrix4 bell = make_state(StateFamily::bell());
  double dev = 0.0;
  for (double eta : {0.0, 1.0}) dev = std::max(dev, max_abs_diff(apply_cad(bell, {1.0, eta}).matrix(), ground().matrix()));
  const NormalizationTable norm = NormalizationTable::standard();
  double worst = 0.0;
  for (double eta : {0.0, 1.0}) {
    const CorrelationVector n = normalize(correlation_vector(apply_cad(bell, {0.999, eta})), norm);
    worst = std::max({worst, std::abs(n.chi), std::abs(*n.qs)});
  }
  return {dev <= 1e-12 && worst <= 0.02, "max |rho(p=1) - |00><00||=" + fmt(dev) + ", max |N| at p=0.999=" + fmt(worst)};
}

Outcome wmr_dominance_grid() {
  const DominanceReport r = wmr_dominance(1e-9);
  std::string d = std::to_string(r.points.size()) + " points, " + std::to_string(r.violations.size()) + " ordering violations";
  for (std::size_t i = 0; i < r.violations.size() && i < 4; ++i) {
    const DominancePoint& v = r.violations[i];
    d += "; " + std::string(family_kind_name(v.family.kind)) + " p=" + fmt(v.p) + " q=" + fmt(v.q) + " eta=" + fmt(v.eta) +
         " C(none,wm1,wm2)=(" + fmt(v.c_none) + "," + fmt(v.c_one) + "," + fmt(v.c_two) + ")";
  }
  d += r.strict_holds() ? "; strict improvement at p=0.5,q=0.8 holds" : "; strict improvement at p=0.5,q=0.8 missing";
  return {r.ordering_holds() && r.strict_holds(), d};
}

Outcome memory_dominance() {
  const DensityMatrix4 bell = make_state(StateFamily::bell());
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double p = i / 200.0;
    const double gap = concurrence(apply_cad(bell, {p, 1.0})) - concurrence(apply_cad(bell, {p, 0.0}));
    worst = std::min(worst, gap);
  }
  return {worst >= -1e-9, "min C(eta=1) - C(eta=0) over 201 p values = " + fmt(worst)};
}

Outcome sudden_death() {
  const DensityMatrix4 w = make_state(StateFamily::werner(0.8));
  const auto c = [&](double p) { return concurrence(apply_cad(w, {p, 0.0})); };
  double lo = 0.0, hi = 1.0 - 1e-12;
  const bool bracket = c(lo) > 0.0 && c(hi) == 0.0;
  while (bracket && hi - lo > 1e-5) {
    const double mid = 0.5 * (lo + hi);
    (c(mid) > 0.0 ? lo : hi) = mid;
  }
  const DensityMatrix4 bell = make_state(StateFamily::bell());
  bool bell_alive = true;
  for (int i = 0; i <= 9999; ++i) {
    const double p = (1.0 - 1e-4) * i / 9999.0;
    if (!(concurrence(apply_cad(bell, {p, 0.0})) > 0.0)) bell_alive = false;
  }
  const bool ok = bracket && hi < 1.0 && bell_alive;
  return {ok, "werner(0.8) p*=" + fmt(0.5 * (lo + hi)) + " (bracket width " + fmt(hi - lo) + "); bell C>0 for p<1-1e-4: " +
                  (bell_alive ? "yes" : "no")};
}

Outcome closed_form_equivalence() {
  const ClosedFormGrid grid;  // 5 points per axis over [0, 0.95]
  const ClosedFormReport r = verify_closed_forms(grid);
  std::string d;
  for (const CaseReport& c : r.cases) {
    d += (d.empty() ? "" : "; ") + c.name + " max dev " + fmt(c.max_deviation) + (c.passed() ? "" : " FAILED");
  }
  return {r.passed(), d};
}

Outcome discord_oracle() {
  oracle::Rng rng(2024);
  const oracle::GridSpec grid{60, 120};
  double lo = 1e300, hi = -1e300;
  int used = 0;
  while (used < 200) {
    const DensityMatrix4 x = oracle::random_x_state(rng, used % 2 == 0);
    const double closed = trace_distance_discord(x);
    if (closed < 1e-6) continue;
    const double ratio = closed / oracle::trace_distance_discord_oracle(x, grid).value;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ++used;
  }
  double jump = 0.0;
  for (double rb : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    const DensityMatrix4 w = make_state(StateFamily::werner(rb));
    const double base = trace_distance_discord(w);
    for (int sign : {-1, 1}) {
      Matrix4c m = w.matrix();
      m(1, 1) += sign * 1e-6;
      m(2, 2) -= sign * 1e-6;
      m(1, 2) += 1e-6;
      m(2, 1) += 1e-6;
      jump = std::max(jump, std::abs(trace_distance_discord(DensityMatrix4(m)) - base));
    }
  }
  return {hi - lo <= 1e-6 && jump < 1e-4,
          "constant " + fmt(0.5 * (lo + hi)) + " spread " + fmt(hi - lo) + "; max perturbation change " + fmt(jump)};
}

Outcome lm_correctness() {
  using namespace nn;
  Mlp net = regression_architecture();
  initialize_uniform(net, 11);
  Eigen::VectorXd x(5);
  x << 0.3, -0.6, 0.1, 0.9, -0.2;
  Eigen::VectorXd grad(net.parameter_count()), scratch(net.parameter_count());
  forward_with_gradient(net, x, grad);
  const Eigen::VectorXd theta = net.parameters();
  double worst = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < theta.size(); ++i) {
    Mlp a = net, b = net;
    Eigen::VectorXd tp = theta, tm = theta;
    tp(i) += h;
    tm(i) -= h;
    a.set_parameters(tp);
    b.set_parameters(tm);
    const double fd = (forward_with_gradient(a, x, scratch) - forward_with_gradient(b, x, scratch)) / (2 * h);
    worst = std::max(worst, std::abs(fd - grad(i)) / std::max(1.0, std::abs(grad(i))));
  }

  RegressionData d;
  d.x.resize(50, 5);
  d.y.resize(50);
  oracle::Rng rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 5; ++j) d.x(i, j) = u(rng);
    d.y(i) = 0.5 - d.x(i, 0) + 2.0 * d.x(i, 2) + 0.25 * d.x(i, 4);
  }
  Mlp lin = Mlp::make({5, 1}, {Activation::Linear});
  TrainConfig c;
  c.train_ratio = 1.0;
  c.val_ratio = 0.0;
  c.test_ratio = 0.0;
  c.min_gradient = 0.0;
  c.max_epochs = 3;
  const TrainReport r = lm_train(lin, d, c);
  return {worst <= 1e-5 && r.mse_train < 1e-20,
          "max relative Jacobian error " + fmt(worst) + "; linear fit MSE " + fmt(r.mse_train) + " after " +
              std::to_string(r.epochs) + " steps"};
}

struct TrainedScenario {
  std::string label;
  nn::TrainedModel model;
};

std::vector<TrainedScenario> trained;

Outcome regression_reproduction() {
  bool ok = true;
  std::string d;
  for (Scenario s : {Scenario::NoWmr, Scenario::WmrTwoQubit}) {
    for (double eta : {0.0, 1.0}) {
      const Dataset data = build_dataset(StateFamily::bell(), s, eta, 500);
      nn::TrainedModel m =
          nn::restart_search(data.regression_data(), 20, 7, nn::TrainConfig{}, nn::regression_architecture(), true);
      const std::string label = std::string(scenario_name(s)) + " eta=" + fmt(eta);
      ok = ok && m.report.mse_test <= 1e-3;
      d += (d.empty() ? "" : "; ") + label + " test MSE " + fmt(m.report.mse_test);
      trained.push_back({label, std::move(m)});
    }
  }
  return {ok, d};
}

Outcome weight_summaries() {
  if (trained.empty()) return {false, "no trained models"};
  bool ok = true;
  for (const TrainedScenario& t : trained) {
    const auto s = nn::weight_summary(t.model.net);
    std::string line = "  " + t.label + ":";
    for (std::size_t i = 0; i < s.size(); ++i) {
      ok = ok && std::isfinite(s[i].mean) && std::isfinite(s[i].std);
      line += " " + std::string(kFeatureNames[i]) + "=" + fmt(s[i].mean) + "+-" + fmt(s[i].std);
    }
    ok = ok && s.size() == 5;
    std::printf("%s\n", line.c_str());
  }
  // same seed, same summary
  const Dataset data = build_dataset(StateFamily::bell(), Scenario::NoWmr, 0.0, 500);
  const nn::TrainedModel again =
      nn::restart_search(data.regression_data(), 20, 7, nn::TrainConfig{}, nn::regression_architecture(), false);
  const auto a = nn::weight_summary(trained.front().model.net);
  const auto b = nn::weight_summary(again.net);
  bool same = a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].mean == b[i].mean && a[i].std == b[i].std;
  return {ok && same, std::string("5 pairs per model, finite; rerun with the same seed ") + (same ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"normalization anchors", normalization_anchors},
      {"steering sudden-death thresholds", steering_thresholds},
      {"endpoint purity", endpoint_purity},
      {"reversal dominance", wmr_dominance_grid},
      {"memory dominance", memory_dominance},
      {"entanglement sudden death", sudden_death},
      {"closed-form equivalence", closed_form_equivalence},
      {"discord oracle equivalence", discord_oracle},
      {"LM correctness", lm_correctness},
      {"regression reproduction", regression_reproduction},
      {"weight summaries", weight_summaries},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
