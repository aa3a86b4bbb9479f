// Command-line front end: sweep, optimize, verify, train, predict, weights.
// Exit codes: 0 success, 1 usage, 2 numerical-contract failure, 3 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cadwmr/dataset.hpp"
#include "cadwmr/errors.hpp"
#include "cadwmr/measures.hpp"
#include "cadwmr/model_io.hpp"
#include "cadwmr/optimizer.hpp"
#include "cadwmr/sweep.hpp"
#include "cadwmr/text.hpp"
#include "cadwmr/verify.hpp"

namespace fs = std::filesystem;
using namespace cadwmr;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

struct IoError : Error {
  using Error::Error;
};

// Output goes to a sibling temporary file that is renamed into place, so a
// failed command never leaves a truncated file behind. "-" means stdout.
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) {
      os.close();
      fs::remove(tmp);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot move output into '" + path + "': " + ec.message());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct FamilyFlags {
  std::string family = "bell";
  std::optional<double> param;

  void add(CLI::App* app) {
    app->add_option("--family", family, "Initial state: bell, werner, mems, nme")
        ->check(CLI::IsMember({"bell", "werner", "mems", "nme"}));
    app->add_option("--param", param,
                    "Family parameter: r_b (werner), gamma (mems), alpha^2 (nme); default 0.8, 0.8, 0.5");
  }

  StateFamily get() const {
    const FamilyKind kind = parse_family_kind(family);
    double value = 1.0;
    switch (kind) {
      case FamilyKind::Bell: value = 1.0; break;
      case FamilyKind::Werner:
      case FamilyKind::Mems: value = param.value_or(0.8); break;
      case FamilyKind::Nme: value = param.value_or(0.5); break;
    }
    if (kind == FamilyKind::Bell && param) throw ConfigError("--param does not apply to the bell family");
    return {kind, value};
  }
};

// ---- sweep -----------------------------------------------------------------

struct SweepFlags {
  FamilyFlags family;
  double eta = 0.0;
  std::string mode = "none";
  std::string var = "p";
  double p = 0.5;
  double q = 0.5;
  double q_max = 0.99;
  int points = 201;
  bool raw_only = false;
  bool serial = false;
  std::string out = "-";
};

void add_sweep(CLI::App& app, SweepFlags& f) {
  CLI::App* cmd = app.add_subcommand("sweep", "Correlation measures along a parameter sweep (CSV)");
  f.family.add(cmd);
  cmd->add_option("--eta", f.eta, "Channel memory in [0, 1]");
  cmd->add_option("--mode", f.mode, "Reversal protocol: none, wm1, wm2")
      ->check(CLI::IsMember({"none", "wm1", "wm2"}));
  cmd->add_option("--var", f.var, "Sweep variable: p, q, alpha2")->check(CLI::IsMember({"p", "q", "alpha2"}));
  cmd->add_option("--p", f.p, "Damping strength when not swept");
  cmd->add_option("--q", f.q, "Weak-measurement strength when not swept");
  cmd->add_option("--q-max", f.q_max, "Upper end of a q sweep");
  cmd->add_option("--points", f.points, "Number of sweep points");
  cmd->add_flag("--raw-only", f.raw_only, "Omit the normalized columns");
  cmd->add_flag("--serial", f.serial, "Use the single-threaded reference kernel");
  cmd->add_option("--out,-o", f.out, "Output CSV path ('-' for stdout)");
}

int run_sweep_cmd(const SweepFlags& f) {
  SweepConfig cfg;
  cfg.family = f.family.get();
  cfg.eta = f.eta;
  cfg.mode = parse_wmr_mode(f.mode);
  cfg.variable = parse_sweep_variable(f.var);
  cfg.p = f.p;
  cfg.q = f.q;
  cfg.q_max = f.q_max;
  cfg.points = f.points;
  cfg.normalized = !f.raw_only;
  const SweepTable table = run_sweep(cfg, !f.serial);
  std::ostringstream os;
  write_sweep_csv(os, table);
  emit(f.out, os.str());
  return 0;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeFlags {
  FamilyFlags family;
  double p = 0.5;
  double eta = 0.0;
  double q = 0.5;
  std::string mode = "wm2";
  std::string out = "-";
};

void add_optimize(CLI::App& app, OptimizeFlags& f) {
  CLI::App* cmd = app.add_subcommand("optimize", "Concurrence-optimal reversal strength (JSON)");
  f.family.add(cmd);
  cmd->add_option("--p", f.p, "Damping strength");
  cmd->add_option("--eta", f.eta, "Channel memory");
  cmd->add_option("--q", f.q, "Weak-measurement strength");
  cmd->add_option("--mode", f.mode, "wm1 or wm2")->check(CLI::IsMember({"none", "wm1", "wm2"}));
  cmd->add_option("--out,-o", f.out, "Output JSON path ('-' for stdout)");
}

int run_optimize_cmd(const OptimizeFlags& f) {
  const StateFamily family = f.family.get();
  const ChannelParams ch{f.p, f.eta};
  const WmrMode mode = parse_wmr_mode(f.mode);
  const OptimizationResult res = optimal_qmr(family, ch, f.q, mode);
  const DensityMatrix4 rho = make_state(family);
  nlohmann::ordered_json j;
  j["family"] = family_kind_name(family.kind);
  j["parameter"] = family.parameter;
  j["p"] = f.p;
  j["eta"] = f.eta;
  j["q"] = f.q;
  j["mode"] = wmr_mode_name(mode);
  j["r_star"] = res.r_star;
  j["concurrence_at_star"] = res.concurrence_at_star;
  j["concurrence_at_r0"] = pipeline_concurrence(rho, ch, f.q, 0.0, mode);
  j["success_probability"] = res.success_probability;
  j["evaluations"] = res.evaluations;
  emit(f.out, j.dump(2) + "\n");
  return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyFlags {
  std::optional<double> tol;
  std::string slice;
  int points_per_axis = 5;
  std::string checks;
  std::uint64_t seed = 1;
  int random_states = 10000;
  bool serial = false;
  std::string out = "-";
};

void add_verify(CLI::App& app, VerifyFlags& f) {
  CLI::App* cmd = app.add_subcommand("verify", "Closed-form cross-checks and invariant suite");
  cmd->add_option("--tol", f.tol, "Tolerance for the closed-form vs pipeline comparison (default 1e-9)");
  cmd->add_option("--slice", f.slice, "Pin grid coordinates, e.g. q=0,r=0");
  cmd->add_option("--points-per-axis", f.points_per_axis, "Grid points per (p, q, r, eta) axis");
  cmd->add_option("--checks", f.checks,
                  "Comma-separated groups: closed_forms, channel, measures, optimizer, dominance (default all)");
  cmd->add_option("--seed", f.seed, "Seed for the random-state checks");
  cmd->add_option("--random-states", f.random_states, "Random states for the channel checks");
  cmd->add_flag("--serial", f.serial, "Use the single-threaded reference kernels");
  cmd->add_option("--out,-o", f.out, "Report path ('-' for stdout)");
}

int run_verify_cmd(const VerifyFlags& f) {
  VerifyOptions opt;
  if (f.tol) opt.grid.tolerance = *f.tol;
  if (!f.slice.empty()) opt.grid.slice = parse_slice(f.slice);
  if (f.points_per_axis < 1) throw ConfigError("--points-per-axis must be at least 1");
  opt.grid.points_per_axis = f.points_per_axis;
  if (!f.checks.empty()) {
    opt.groups.clear();
    std::stringstream ss(f.checks);
    std::string g;
    while (std::getline(ss, g, ',')) opt.groups.insert(g);
  }
  if (f.random_states < 1) throw ConfigError("--random-states must be positive");
  opt.seed = f.seed;
  opt.random_states = f.random_states;
  opt.parallel = !f.serial;
  const VerifyReport report = run_verification(opt);
  emit(f.out, report.to_text());
  return report.passed() ? 0 : kExitVerification;
}

// ---- train -----------------------------------------------------------------

struct TrainFlags {
  std::string dataset;
  FamilyFlags family;
  std::string scenario = "no_wmr";
  double eta = 0.0;
  int points = 500;
  int restarts = 20;
  std::uint64_t seed = 7;
  int max_epochs = 1000;
  bool serial = false;
  std::string model_out = "model.json";
  std::string weights_out;
  std::string dataset_out;
};

void add_train(CLI::App& app, TrainFlags& f) {
  CLI::App* cmd = app.add_subcommand("train", "Fit the discord regressor with seeded restarts");
  cmd->add_option("--dataset", f.dataset, "Dataset CSV (otherwise generated from the flags below)");
  f.family.add(cmd);
  cmd->add_option("--scenario", f.scenario, "no_wmr or wmr_two_qubit")
      ->check(CLI::IsMember({"no_wmr", "wmr_two_qubit"}));
  cmd->add_option("--eta", f.eta, "Channel memory for a generated dataset");
  cmd->add_option("--points", f.points, "Rows of a generated dataset");
  cmd->add_option("--restarts", f.restarts, "Independent initializations");
  cmd->add_option("--seed", f.seed, "Seed for the split and all initializations");
  cmd->add_option("--max-epochs", f.max_epochs, "Epoch limit per restart");
  cmd->add_flag("--serial", f.serial, "Train restarts sequentially");
  cmd->add_option("--model-out,-o", f.model_out, "Model JSON path");
  cmd->add_option("--weights-out", f.weights_out, "Weight-summary CSV path");
  cmd->add_option("--dataset-out", f.dataset_out, "Write the (generated) dataset CSV here");
}

Dataset load_or_build(const TrainFlags& f) {
  if (!f.dataset.empty()) {
    std::istringstream is(slurp(f.dataset));
    return read_dataset_csv(is);
  }
  return build_dataset(f.family.get(), parse_scenario(f.scenario), f.eta, f.points, {}, !f.serial);
}

int run_train_cmd(const TrainFlags& f) {
  const Dataset data = load_or_build(f);
  nn::TrainConfig cfg;
  cfg.max_epochs = f.max_epochs;
  const nn::TrainedModel model =
      nn::restart_search(data.regression_data(), f.restarts, f.seed, cfg, nn::regression_architecture(), !f.serial);
  if (!f.dataset_out.empty()) {
    std::ostringstream os;
    write_dataset_csv(os, data);
    emit(f.dataset_out, os.str());
  }
  emit(f.model_out, model_to_json(model));
  const std::vector<nn::WeightStat> summary = nn::weight_summary(model.net);
  if (!f.weights_out.empty()) {
    std::ostringstream os;
    write_weight_summary_csv(os, summary);
    emit(f.weights_out, os.str());
  }
  const nn::TrainReport& r = model.report;
  std::cerr << "rows " << data.rows.size() << ", best restart " << r.best_restart << " of "
            << r.restarts_run << ": mse train " << format_double(r.mse_train) << ", val "
            << format_double(r.mse_val) << ", test " << format_double(r.mse_test) << " (" << r.epochs
            << " epochs, " << r.stop_reason << ")\n";
  std::cerr << "first-layer mean weights:";
  for (std::size_t k = 0; k < summary.size(); ++k) {
    std::cerr << ' ' << kFeatureNames[k] << '=' << format_double(summary[k].mean);
  }
  std::cerr << '\n';
  return 0;
}

// ---- predict ---------------------------------------------------------------

struct PredictFlags {
  std::string model;
  std::string dataset;
  std::vector<double> features;
  std::string out = "-";
};

void add_predict(CLI::App& app, PredictFlags& f) {
  CLI::App* cmd = app.add_subcommand("predict", "Evaluate a trained model");
  cmd->add_option("--model", f.model, "Model JSON")->required();
  auto* ds = cmd->add_option("--dataset", f.dataset, "Dataset CSV; writes sweep_value,tdd,predicted");
  auto* ft = cmd->add_option("--features", f.features, "jsd,concurrence,fidelity,qs,chi")
                 ->delimiter(',')
                 ->expected(5);
  ds->excludes(ft);
  cmd->add_option("--out,-o", f.out, "Output path ('-' for stdout)");
}

int run_predict_cmd(const PredictFlags& f) {
  const nn::TrainedModel model = model_from_json(slurp(f.model));
  if (!f.features.empty()) {
    emit(f.out, format_double(nn::forward(model.net, f.features)) + "\n");
    return 0;
  }
  if (f.dataset.empty()) throw ConfigError("predict needs --dataset or --features");
  std::istringstream is(slurp(f.dataset));
  const Dataset data = read_dataset_csv(is);
  std::ostringstream os;
  os << "sweep_value,tdd,predicted\n";
  double sse = 0.0;
  for (const DatasetRow& r : data.rows) {
    const double y = nn::forward(model.net, r.features);
    sse += (y - r.target) * (y - r.target);
    os << format_double(r.sweep_value) << ',' << format_double(r.target) << ',' << format_double(y) << '\n';
  }
  emit(f.out, os.str());
  std::cerr << "mse " << format_double(sse / static_cast<double>(data.rows.size())) << " over "
            << data.rows.size() << " rows\n";
  return 0;
}

// ---- weights ---------------------------------------------------------------

struct WeightsFlags {
  std::string model;
  std::string out = "-";
};

void add_weights(CLI::App& app, WeightsFlags& f) {
  CLI::App* cmd = app.add_subcommand("weights", "First-layer weight summary of a model (CSV)");
  cmd->add_option("--model", f.model, "Model JSON")->required();
  cmd->add_option("--out,-o", f.out, "Output CSV path ('-' for stdout)");
}

int run_weights_cmd(const WeightsFlags& f) {
  const nn::TrainedModel model = model_from_json(slurp(f.model));
  std::ostringstream os;
  write_weight_summary_csv(os, nn::weight_summary(model.net));
  emit(f.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlated amplitude damping with weak-measurement reversal"};
  app.require_subcommand(1);
  SweepFlags sweep;
  OptimizeFlags optimize;
  VerifyFlags verify;
  TrainFlags train;
  PredictFlags predict;
  WeightsFlags weights;
  add_sweep(app, sweep);
  add_optimize(app, optimize);
  add_verify(app, verify);
  add_train(app, train);
  add_predict(app, predict);
  add_weights(app, weights);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("sweep")) return run_sweep_cmd(sweep);
    if (app.got_subcommand("optimize")) return run_optimize_cmd(optimize);
    if (app.got_subcommand("verify")) return run_verify_cmd(verify);
    if (app.got_subcommand("train")) return run_train_cmd(train);
    if (app.got_subcommand("predict")) return run_predict_cmd(predict);
    if (app.got_subcommand("weights")) return run_weights_cmd(weights);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
