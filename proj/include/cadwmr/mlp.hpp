#pragma once

// Fully connected feed-forward regressor with per-layer activations and
// min-max input scaling to [-1, 1].

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cadwmr::nn {

enum class Activation { LogSigmoid, TanSigmoid, Linear };

std::string_view activation_name(Activation a);  // logsig, tansig, purelin
Activation parse_activation(std::string_view name);

double activate(Activation a, double x);
/// Derivative expressed through the activation value y = f(x).
double activate_derivative(Activation a, double y);

struct FeatureScaling {
  double min = -1.0;
  double max = 1.0;

  double apply(double x) const { return 2.0 * (x - min) / (max - min) - 1.0; }
};

struct Mlp {
  std::vector<int> layer_sizes;          // input, hidden..., output
  std::vector<Activation> activations;   // one per weight layer
  std::vector<Eigen::MatrixXd> weights;  // weights[l] is sizes[l+1] x sizes[l]
  std::vector<Eigen::VectorXd> biases;
  std::vector<FeatureScaling> input_scaling;
  std::uint64_t seed = 0;

  /// Zero weights and identity scaling ([-1, 1] -> [-1, 1]).
  static Mlp make(std::vector<int> sizes, std::vector<Activation> activations);

  int input_size() const { return layer_sizes.front(); }
  int parameter_count() const;

  /// Flattened parameters: per layer, weights row-major then biases.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& theta);

  /// Throws ConfigError on inconsistent dimensions or degenerate scaling.
  void validate() const;
};

/// 5 -> 40 -> 24 -> 16 -> 1 with log-sigmoid, tan-sigmoid, linear, linear.
Mlp regression_architecture();

/// Uniform initialization of every weight and bias in [-range, range].
void initialize_uniform(Mlp& net, std::uint64_t seed, double range = 0.5);

Eigen::VectorXd scale_inputs(const Mlp& net, std::span<const double> features);

double forward(const Mlp& net, std::span<const double> features);

/// Output for an already scaled input, with d(output)/d(parameters) written
/// to grad (same layout as Mlp::parameters()).
double forward_with_gradient(const Mlp& net, const Eigen::VectorXd& scaled_input,
                             Eigen::Ref<Eigen::VectorXd> grad);

/// Min-max scaling fitted on the given rows. Constant columns get the window
/// [v - 1, v + 1] so they map to 0.
std::vector<FeatureScaling> fit_scaling(const Eigen::MatrixXd& x);

}  // namespace cadwmr::nn
