#pragma once

// Levenberg-Marquardt training of an Mlp on scalar regression data, seeded
// restarts with best-of selection, and first-layer weight summaries.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cadwmr/mlp.hpp"

namespace cadwmr::nn {

struct RegressionData {
  Eigen::MatrixXd x;  // one row per sample
  Eigen::VectorXd y;
};

struct TrainConfig {
  double train_ratio = 0.70;
  double val_ratio = 0.15;
  double test_ratio = 0.15;
  std::uint64_t split_seed = 1;

  double mu_initial = 1e-3;
  double mu_decrease = 0.1;
  double mu_increase = 10.0;
  double mu_max = 1e10;
  int max_epochs = 1000;
  double min_gradient = 1e-7;  // infinity norm of d(train MSE)/d(parameters)
  int max_validation_failures = 6;
  double goal = 0.0;  // stop once train MSE <= goal

  double init_range = 0.5;
  bool fit_input_scaling = true;

  void validate() const;
};

struct DataSplit {
  std::vector<int> train;
  std::vector<int> validation;
  std::vector<int> test;
};

/// Seeded shuffle of 0..n-1 cut at the configured ratios (test takes the rest).
DataSplit split_indices(std::size_t n, const TrainConfig& config);

struct TrainReport {
  double mse_train = 0.0;
  double mse_val = 0.0;
  double mse_test = 0.0;
  int epochs = 0;
  int restarts_run = 1;
  int best_restart = 0;
  double mu_final = 0.0;
  std::string stop_reason;
  std::vector<double> train_mse_history;  // after each accepted step, starting with the initial MSE
  std::vector<double> restart_test_mse;   // filled by restart_search
};

/// Mean squared error of the network over the selected rows.
double mse(const Mlp& net, const RegressionData& data, const std::vector<int>& rows);

/// Trains `net` in place starting from its current parameters. Input scaling
/// is refitted on the training rows when enabled. Best-validation parameters
/// are restored at the end when a validation split exists.
/// Throws TrainingError when the loss becomes non-finite.
TrainReport lm_train(Mlp& net, const RegressionData& data, const TrainConfig& config);

/// Jacobian of the network output over the given rows (rows x parameters),
/// inputs taken as already scaled.
Eigen::MatrixXd output_jacobian(const Mlp& net, const Eigen::MatrixXd& scaled_x,
                                Eigen::VectorXd* outputs = nullptr);

struct TrainedModel {
  Mlp net;
  TrainReport report;
};

/// Seed for restart i derived from the base seed.
std::uint64_t restart_seed(std::uint64_t base, int index);

/// Trains `restarts` independently initialized copies of `architecture`
/// (optionally in parallel) and keeps the lowest test MSE, ties to the lower
/// index. The split is shared by all restarts and derived from `seed`.
TrainedModel restart_search(const RegressionData& data, int restarts, std::uint64_t seed,
                            const TrainConfig& config, const Mlp& architecture,
                            bool parallel = true);

struct WeightStat {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over first-layer neurons
};

/// Per input feature statistics of the first weight layer.
std::vector<WeightStat> weight_summary(const Mlp& net);

}  // namespace cadwmr::nn
