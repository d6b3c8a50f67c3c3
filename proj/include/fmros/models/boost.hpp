#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fmros/features.hpp"
#include "fmros/loss.hpp"
#include "fmros/models/tree.hpp"

namespace fmros {

struct BoostParams {
  int max_depth = 4;
  double eta = 0.1;
  double min_child_weight = 1;
  double subsample = 0.8;
  double colsample_bytree = 0.9;
  int n_estimators = 120;
  double gamma = 0.1;
  double lambda = 1.0;  // L2 leaf regularization
};

struct BoostModel {
  BoostParams params;
  std::size_t n_features = kNumPredictors;
  double base_score = 0.0;
  std::vector<Tree> trees;  // raw leaf weights; eta applied at prediction
};

// Second-order gradient boosting under the loss module's (grad, hess). Each
// round fits a depth-limited tree on a row subsample and feature subset;
// prediction is base_score + eta * sum of tree outputs. Per-round RNG
// streams derive from (seed, round).
BoostModel fit_boost(const ModelDataset& data, const LossSpec& loss, std::uint64_t seed,
                     const BoostParams& params = {});

std::vector<double> predict(const BoostModel& model, std::span<const double> features,
                            std::size_t n_cols);
std::vector<double> predict(const BoostModel& model, const ModelDataset& data);

}  // namespace fmros
