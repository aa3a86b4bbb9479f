#include "cadwmr/training.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>

#include "cadwmr/errors.hpp"

namespace cadwmr::nn {

void TrainConfig::validate() const {
  const double sum = train_ratio + val_ratio + test_ratio;
  if (!(train_ratio > 0.0) || val_ratio < 0.0 || test_ratio < 0.0 || std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative, train > 0, and sum to 1");
  }
  if (!(mu_initial > 0.0) || !(mu_decrease > 0.0 && mu_decrease < 1.0) || !(mu_increase > 1.0)) {
    throw ConfigError("invalid damping schedule");
  }
  if (max_epochs < 0 || max_validation_failures < 1) throw ConfigError("invalid stop criteria");
}

DataSplit split_indices(std::size_t n, const TrainConfig& config) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(config.split_seed);
  // Fisher-Yates with an explicit draw so the order does not depend on the
  // standard library's shuffle implementation.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  const auto n_train = static_cast<std::size_t>(std::llround(config.train_ratio * n));
  const auto n_val = std::min(n - n_train, static_cast<std::size_t>(std::llround(config.val_ratio * n)));
  DataSplit s;
  s.train.assign(idx.begin(), idx.begin() + n_train);
  s.validation.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
  s.test.assign(idx.begin() + n_train + n_val, idx.end());
  return s;
}

namespace {

Eigen::MatrixXd scaled_rows(const Mlp& net, const RegressionData& data, const std::vector<int>& rows) {
  Eigen::MatrixXd out(rows.size(), data.x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < data.x.cols(); ++j) out(i, j) = net.input_scaling[j].apply(data.x(rows[i], j));
  }
  return out;
}

Eigen::VectorXd targets(const RegressionData& data, const std::vector<int>& rows) {
  Eigen::VectorXd t(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) t(i) = data.y(rows[i]);
  return t;
}

double forward_scaled(const Mlp& net, const Eigen::VectorXd& x) {
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Eigen::VectorXd z = net.weights[l] * a + net.biases[l];
    for (int i = 0; i < z.size(); ++i) z(i) = activate(net.activations[l], z(i));
    a = std::move(z);
  }
  return a(0);
}

double mse_scaled(const Mlp& net, const Eigen::MatrixXd& x, const Eigen::VectorXd& t) {
  if (x.rows() == 0) return 0.0;
  double acc = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    const double e = t(i) - forward_scaled(net, x.row(i).transpose());
    acc += e * e;
  }
  return acc / static_cast<double>(x.rows());
}

// Solves (J^T J + mu I) delta = J^T e, through the n x n system
// J^T (J J^T + mu I)^{-1} e when there are fewer samples than parameters.
class DampedSolver {
 public:
  DampedSolver(const Eigen::MatrixXd& jac, const Eigen::VectorXd& err) : j_(jac), e_(err) {
    sample_space_ = jac.rows() < jac.cols();
    if (sample_space_) {
      gram_ = Eigen::MatrixXd::Zero(jac.rows(), jac.rows());
      gram_.selfadjointView<Eigen::Lower>().rankUpdate(jac);
    } else {
      gram_ = Eigen::MatrixXd::Zero(jac.cols(), jac.cols());
      gram_.selfadjointView<Eigen::Lower>().rankUpdate(jac.transpose());
      rhs_ = jac.transpose() * err;
    }
  }

  bool solve(double mu, Eigen::VectorXd& delta) const {
    Eigen::MatrixXd a = gram_;
    a.diagonal().array() += mu;
    Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(a);
    if (llt.info() != Eigen::Success) return false;
    if (sample_space_) {
      delta = j_.transpose() * llt.solve(e_);
    } else {
      delta = llt.solve(rhs_);
    }
    return delta.allFinite();
  }

 private:
  const Eigen::MatrixXd& j_;
  const Eigen::VectorXd& e_;
  bool sample_space_ = false;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd rhs_;
};

}  // namespace

double mse(const Mlp& net, const RegressionData& data, const std::vector<int>& rows) {
  return mse_scaled(net, scaled_rows(net, data, rows), targets(data, rows));
}

Eigen::MatrixXd output_jacobian(const Mlp& net, const Eigen::MatrixXd& scaled_x,
                                Eigen::VectorXd* outputs) {
  Eigen::MatrixXd jac(scaled_x.rows(), net.parameter_count());
  Eigen::VectorXd grad(net.parameter_count());
  if (outputs) outputs->resize(scaled_x.rows());
  for (int i = 0; i < scaled_x.rows(); ++i) {
    const double y = forward_with_gradient(net, scaled_x.row(i).transpose(), grad);
    jac.row(i) = grad.transpose();
    if (outputs) (*outputs)(i) = y;
  }
  return jac;
}

TrainReport lm_train(Mlp& net, const RegressionData& data, const TrainConfig& config) {
  config.validate();
  net.validate();
  if (data.x.rows() != data.y.size() || data.x.cols() != net.input_size()) {
    throw ConfigError("regression data does not match the network input size");
  }
  const DataSplit split = split_indices(static_cast<std::size_t>(data.x.rows()), config);
  if (split.train.empty()) throw ConfigError("training split is empty");

  if (config.fit_input_scaling) {
    Eigen::MatrixXd train_x(split.train.size(), data.x.cols());
    for (std::size_t i = 0; i < split.train.size(); ++i) train_x.row(i) = data.x.row(split.train[i]);
    net.input_scaling = fit_scaling(train_x);
  }

  const Eigen::MatrixXd xt = scaled_rows(net, data, split.train);
  const Eigen::VectorXd tt = targets(data, split.train);
  const Eigen::MatrixXd xv = scaled_rows(net, data, split.validation);
  const Eigen::VectorXd tv = targets(data, split.validation);
  const double n_train = static_cast<double>(xt.rows());
  const bool has_validation = xv.rows() > 0;

  TrainReport report;
  Eigen::VectorXd theta = net.parameters();
  double mu = config.mu_initial;
  double train_mse = mse_scaled(net, xt, tt);
  if (!std::isfinite(train_mse)) throw TrainingError("initial training loss is not finite");
  report.train_mse_history.push_back(train_mse);

  double best_val = has_validation ? mse_scaled(net, xv, tv) : 0.0;
  Eigen::VectorXd best_theta = theta;
  int val_failures = 0;
  report.stop_reason = "max_epochs";

  Eigen::VectorXd outputs;
  Eigen::VectorXd delta;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    if (train_mse <= config.goal) {
      report.stop_reason = "goal";
      break;
    }
    const Eigen::MatrixXd jac = output_jacobian(net, xt, &outputs);
    const Eigen::VectorXd err = tt - outputs;
    const double grad_norm = (2.0 / n_train) * (jac.transpose() * err).cwiseAbs().maxCoeff();
    if (grad_norm < config.min_gradient) {
      report.stop_reason = "min_gradient";
      break;
    }

    const DampedSolver solver(jac, err);
    bool accepted = false;
    while (!accepted) {
      if (solver.solve(mu, delta)) {
        net.set_parameters(theta + delta);
        const double trial = mse_scaled(net, xt, tt);
        if (std::isfinite(trial) && trial < train_mse) {
          theta += delta;
          train_mse = trial;
          mu *= config.mu_decrease;
          accepted = true;
          break;
        }
      }
      mu *= config.mu_increase;
      if (mu > config.mu_max) break;
    }
    net.set_parameters(theta);
    if (!accepted) {
      report.stop_reason = "mu_max";
      break;
    }
    ++report.epochs;
    report.train_mse_history.push_back(train_mse);

    if (has_validation) {
      const double v = mse_scaled(net, xv, tv);
      if (!std::isfinite(v)) throw TrainingError("validation loss is not finite");
      if (v < best_val) {
        best_val = v;
        best_theta = theta;
        val_failures = 0;
      } else if (++val_failures >= config.max_validation_failures) {
        report.stop_reason = "validation_stop";
        break;
      }
    }
  }

  if (has_validation) net.set_parameters(best_theta);
  report.mu_final = mu;
  report.mse_train = mse(net, data, split.train);
  report.mse_val = has_validation ? mse(net, data, split.validation) : 0.0;
  report.mse_test = split.test.empty() ? 0.0 : mse(net, data, split.test);
  if (!std::isfinite(report.mse_train) || !std::isfinite(report.mse_test)) {
    throw TrainingError("training finished with a non-finite loss");
  }
  return report;
}

std::uint64_t restart_seed(std::uint64_t base, int index) {
  // splitmix64 step over (base, index)
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrainedModel restart_search(const RegressionData& data, int restarts, std::uint64_t seed,
                            const TrainConfig& config, const Mlp& architecture, bool parallel) {
  if (restarts < 1) throw ConfigError("restarts must be at least 1");
  TrainConfig cfg = config;
  cfg.split_seed = seed;

  std::vector<Mlp> nets(restarts, architecture);
  std::vector<TrainReport> reports(restarts);
  std::vector<std::exception_ptr> errors(restarts);

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < restarts; ++i) {
    try {
      initialize_uniform(nets[i], restart_seed(seed, i), cfg.init_range);
      reports[i] = lm_train(nets[i], data, cfg);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }

  int best = -1;
  std::vector<double> test_mse(restarts, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < restarts; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const TrainingError&) {
        continue;  // restart-level failure
      }
    }
    test_mse[i] = reports[i].mse_test;
    if (best < 0 || reports[i].mse_test < reports[best].mse_test) best = i;
  }
  if (best < 0) throw TrainingError("every restart produced a non-finite loss");

  TrainedModel out{nets[best], reports[best]};
  out.report.restarts_run = restarts;
  out.report.best_restart = best;
  out.report.restart_test_mse = std::move(test_mse);
  return out;
}

std::vector<WeightStat> weight_summary(const Mlp& net) {
  net.validate();
  const Eigen::MatrixXd& w = net.weights.front();
  std::vector<WeightStat> out(w.cols());
  for (int j = 0; j < w.cols(); ++j) {
    const double mean = w.col(j).mean();
    const double var = (w.col(j).array() - mean).square().mean();
    out[j] = {mean, std::sqrt(var)};
  }
  return out;
}

}  // namespace cadwmr::nn
