#include "cadwmr/model_io.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "cadwmr/dataset.hpp"
#include "cadwmr/errors.hpp"
#include "cadwmr/text.hpp"

namespace cadwmr {

using nlohmann::json;

namespace {

// Failed restarts carry NaN, stored as null.
json mse_list(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  return out;
}

json report_json(const nn::TrainReport& r) {
  return json{{"mse_train", r.mse_train},
              {"mse_val", r.mse_val},
              {"mse_test", r.mse_test},
              {"epochs", r.epochs},
              {"restarts_run", r.restarts_run},
              {"best_restart", r.best_restart},
              {"mu_final", r.mu_final},
              {"stop_reason", r.stop_reason},
              {"restart_test_mse", mse_list(r.restart_test_mse)}};
}

nn::TrainReport report_from_json(const json& j) {
  nn::TrainReport r;
  r.mse_train = j.at("mse_train").get<double>();
  r.mse_val = j.at("mse_val").get<double>();
  r.mse_test = j.at("mse_test").get<double>();
  r.epochs = j.at("epochs").get<int>();
  r.restarts_run = j.at("restarts_run").get<int>();
  r.best_restart = j.at("best_restart").get<int>();
  r.mu_final = j.at("mu_final").get<double>();
  r.stop_reason = j.at("stop_reason").get<std::string>();
  for (const auto& x : j.at("restart_test_mse")) {
    r.restart_test_mse.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
  }
  return r;
}

}  // namespace

std::string model_to_json(const nn::TrainedModel& model) {
  const nn::Mlp& net = model.net;
  json doc;
  doc["format"] = "cadwmr-mlp";
  doc["version"] = 1;
  doc["layer_sizes"] = net.layer_sizes;
  json acts = json::array();
  for (nn::Activation a : net.activations) acts.push_back(std::string(nn::activation_name(a)));
  doc["activations"] = acts;

  json layers = json::array();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const Eigen::MatrixXd& w = net.weights[l];
    json rows = json::array();
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      std::vector<double> row(w.cols());
      for (Eigen::Index k = 0; k < w.cols(); ++k) row[k] = w(i, k);
      rows.push_back(row);
    }
    const Eigen::VectorXd& b = net.biases[l];
    layers.push_back({{"weights", rows}, {"biases", std::vector<double>(b.data(), b.data() + b.size())}});
  }
  doc["layers"] = layers;

  json scaling = json::array();
  for (std::size_t k = 0; k < net.input_scaling.size(); ++k) {
    json s{{"min", net.input_scaling[k].min}, {"max", net.input_scaling[k].max}};
    if (static_cast<int>(k) < static_cast<int>(kFeatureNames.size()) &&
        net.input_size() == static_cast<int>(kFeatureNames.size())) {
      s["feature"] = kFeatureNames[k];
    }
    scaling.push_back(s);
  }
  doc["input_scaling"] = scaling;
  doc["seed"] = net.seed;
  doc["train_report"] = report_json(model.report);
  return doc.dump(2) + "\n";
}

nn::TrainedModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    nn::TrainedModel model;
    nn::Mlp& net = model.net;
    net.layer_sizes = doc.at("layer_sizes").get<std::vector<int>>();
    for (const auto& a : doc.at("activations")) net.activations.push_back(nn::parse_activation(a.get<std::string>()));
    for (const auto& layer : doc.at("layers")) {
      const auto rows = layer.at("weights").get<std::vector<std::vector<double>>>();
      const auto bias = layer.at("biases").get<std::vector<double>>();
      const Eigen::Index cols = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
      Eigen::MatrixXd w(static_cast<Eigen::Index>(rows.size()), cols);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != cols) throw ParseError("ragged weight matrix in model file");
        for (Eigen::Index k = 0; k < cols; ++k) w(static_cast<Eigen::Index>(i), k) = rows[i][k];
      }
      net.weights.push_back(w);
      net.biases.push_back(Eigen::Map<const Eigen::VectorXd>(bias.data(), static_cast<Eigen::Index>(bias.size())));
    }
    for (const auto& s : doc.at("input_scaling")) {
      net.input_scaling.push_back({s.at("min").get<double>(), s.at("max").get<double>()});
    }
    net.seed = doc.at("seed").get<std::uint64_t>();
    model.report = report_from_json(doc.at("train_report"));
    net.validate();
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
}

void write_weight_summary_csv(std::ostream& os, const std::vector<nn::WeightStat>& summary) {
  os << "input,mean,std\n";
  for (std::size_t k = 0; k < summary.size(); ++k) {
    const std::string name = k < kFeatureNames.size() ? kFeatureNames[k] : "x" + std::to_string(k);
    os << name << ',' << format_double(summary[k].mean) << ',' << format_double(summary[k].std) << '\n';
  }
}

}  // namespace cadwmr
