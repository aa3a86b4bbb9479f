#pragma once

// JSON model documents and the first-layer weight summary CSV.

#include <iosfwd>
#include <string>
#include <vector>

#include "cadwmr/training.hpp"

namespace cadwmr {

/// Self-describing document: layer sizes, activation names, row-major weight
/// matrices, biases, input scaling, seed and the training report.
std::string model_to_json(const nn::TrainedModel& model);
/// Throws ParseError on malformed documents and ConfigError on inconsistent
/// dimensions.
nn::TrainedModel model_from_json(const std::string& text);

/// Header: input,mean,std with one row per feature.
void write_weight_summary_csv(std::ostream& os, const std::vector<nn::WeightStat>& summary);

}  // namespace cadwmr
