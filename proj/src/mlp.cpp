#include "cadwmr/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "cadwmr/errors.hpp"

namespace cadwmr::nn {

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::LogSigmoid: return "logsig";
    case Activation::TanSigmoid: return "tansig";
    case Activation::Linear: return "purelin";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "logsig") return Activation::LogSigmoid;
  if (name == "tansig") return Activation::TanSigmoid;
  if (name == "purelin" || name == "linear") return Activation::Linear;
  throw ParseError("unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::LogSigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::TanSigmoid: return 2.0 / (1.0 + std::exp(-2.0 * x)) - 1.0;
    case Activation::Linear: return x;
  }
  return x;
}

double activate_derivative(Activation a, double y) {
  switch (a) {
    case Activation::LogSigmoid: return y * (1.0 - y);
    case Activation::TanSigmoid: return 1.0 - y * y;
    case Activation::Linear: return 1.0;
  }
  return 1.0;
}

Mlp Mlp::make(std::vector<int> sizes, std::vector<Activation> acts) {
  Mlp net;
  net.layer_sizes = std::move(sizes);
  net.activations = std::move(acts);
  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    net.weights.push_back(Eigen::MatrixXd::Zero(net.layer_sizes[l + 1], net.layer_sizes[l]));
    net.biases.push_back(Eigen::VectorXd::Zero(net.layer_sizes[l + 1]));
  }
  if (!net.layer_sizes.empty()) net.input_scaling.assign(net.layer_sizes.front(), FeatureScaling{});
  net.validate();
  return net;
}

int Mlp::parameter_count() const {
  int n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += static_cast<int>(weights[l].size() + biases[l].size());
  }
  return n;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd theta(parameter_count());
  int k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (int i = 0; i < weights[l].rows(); ++i)
      for (int j = 0; j < weights[l].cols(); ++j) theta(k++) = weights[l](i, j);
    for (int i = 0; i < biases[l].size(); ++i) theta(k++) = biases[l](i);
  }
  return theta;
}

void Mlp::set_parameters(const Eigen::VectorXd& theta) {
  if (theta.size() != parameter_count()) throw ConfigError("parameter vector has wrong length");
  int k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (int i = 0; i < weights[l].rows(); ++i)
      for (int j = 0; j < weights[l].cols(); ++j) weights[l](i, j) = theta(k++);
    for (int i = 0; i < biases[l].size(); ++i) biases[l](i) = theta(k++);
  }
}

void Mlp::validate() const {
  if (layer_sizes.size() < 2) throw ConfigError("network needs at least input and output layers");
  for (int s : layer_sizes)
    if (s <= 0) throw ConfigError("layer sizes must be positive");
  if (layer_sizes.back() != 1) throw ConfigError("network output must be scalar");
  const std::size_t layers = layer_sizes.size() - 1;
  if (activations.size() != layers || weights.size() != layers || biases.size() != layers) {
    throw ConfigError("activations/weights/biases do not match the layer count");
  }
  for (std::size_t l = 0; l < layers; ++l) {
    if (weights[l].rows() != layer_sizes[l + 1] || weights[l].cols() != layer_sizes[l] ||
        biases[l].size() != layer_sizes[l + 1]) {
      throw ConfigError("layer " + std::to_string(l) + " has inconsistent dimensions");
    }
  }
  if (static_cast<int>(input_scaling.size()) != layer_sizes.front()) {
    throw ConfigError("input scaling must have one entry per input");
  }
  for (const auto& s : input_scaling) {
    if (!(s.min < s.max)) throw ConfigError("input scaling requires min < max");
  }
}

Mlp regression_architecture() {
  return Mlp::make({5, 40, 24, 16, 1}, {Activation::LogSigmoid, Activation::TanSigmoid,
                                        Activation::Linear, Activation::Linear});
}

void initialize_uniform(Mlp& net, std::uint64_t seed, double range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-range, range);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (int i = 0; i < net.weights[l].rows(); ++i)
      for (int j = 0; j < net.weights[l].cols(); ++j) net.weights[l](i, j) = u(rng);
    for (int i = 0; i < net.biases[l].size(); ++i) net.biases[l](i) = u(rng);
  }
  net.seed = seed;
}

Eigen::VectorXd scale_inputs(const Mlp& net, std::span<const double> features) {
  if (static_cast<int>(features.size()) != net.input_size()) {
    throw ConfigError("expected " + std::to_string(net.input_size()) + " features, got " +
                      std::to_string(features.size()));
  }
  Eigen::VectorXd x(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) x(i) = net.input_scaling[i].apply(features[i]);
  return x;
}

namespace {

Eigen::VectorXd propagate(const Mlp& net, const Eigen::VectorXd& input,
                          std::vector<Eigen::VectorXd>* trace) {
  Eigen::VectorXd a = input;
  if (trace) trace->push_back(a);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Eigen::VectorXd z = net.weights[l] * a + net.biases[l];
    for (int i = 0; i < z.size(); ++i) z(i) = activate(net.activations[l], z(i));
    a = std::move(z);
    if (trace) trace->push_back(a);
  }
  return a;
}

}  // namespace

double forward(const Mlp& net, std::span<const double> features) {
  return propagate(net, scale_inputs(net, features), nullptr)(0);
}

double forward_with_gradient(const Mlp& net, const Eigen::VectorXd& scaled_input,
                             Eigen::Ref<Eigen::VectorXd> grad) {
  std::vector<Eigen::VectorXd> acts;
  acts.reserve(net.weights.size() + 1);
  const double y = propagate(net, scaled_input, &acts)(0);

  // offsets of each layer's block in the flattened parameter vector
  std::vector<int> offset(net.weights.size());
  int k = 0;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    offset[l] = k;
    k += static_cast<int>(net.weights[l].size() + net.biases[l].size());
  }

  Eigen::VectorXd delta(1);
  delta(0) = activate_derivative(net.activations.back(), acts.back()(0));
  for (int l = static_cast<int>(net.weights.size()) - 1; l >= 0; --l) {
    const Eigen::VectorXd& prev = acts[l];
    const int rows = static_cast<int>(net.weights[l].rows());
    const int cols = static_cast<int>(net.weights[l].cols());
    int o = offset[l];
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) grad(o + i * cols + j) = delta(i) * prev(j);
    }
    o += rows * cols;
    for (int i = 0; i < rows; ++i) grad(o + i) = delta(i);
    if (l > 0) {
      Eigen::VectorXd back = net.weights[l].transpose() * delta;
      for (int j = 0; j < back.size(); ++j) {
        back(j) *= activate_derivative(net.activations[l - 1], prev(j));
      }
      delta = std::move(back);
    }
  }
  return y;
}

std::vector<FeatureScaling> fit_scaling(const Eigen::MatrixXd& x) {
  std::vector<FeatureScaling> out(x.cols());
  for (int j = 0; j < x.cols(); ++j) {
    const double lo = x.col(j).minCoeff();
    const double hi = x.col(j).maxCoeff();
    out[j] = hi > lo ? FeatureScaling{lo, hi} : FeatureScaling{lo - 1.0, lo + 1.0};
  }
  return out;
}

}  // namespace cadwmr::nn
