#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fmros/features.hpp"
#include "fmros/models/tree.hpp"

namespace fmros {

struct ForestParams {
  int n_estimators = 50;
  int max_depth = 8;
  double min_samples_split = 2;
  double min_samples_leaf = 1;
  double max_features = 0.8;  // fraction of predictors per tree
  bool bootstrap = true;
};

struct ForestModel {
  ForestParams params;
  std::size_t n_features = kNumPredictors;
  std::vector<Tree> trees;
};

// Weighted random forest. Each tree sees a uniform bootstrap resample and a
// per-tree feature subset; the sample weights enter the split criterion and
// leaf means only. Per-tree RNG streams derive from (seed, tree index).
ForestModel fit_forest(const ModelDataset& data, std::span<const double> w, std::uint64_t seed,
                       const ForestParams& params = {});

std::vector<double> predict(const ForestModel& model, std::span<const double> features,
                            std::size_t n_cols);
std::vector<double> predict(const ForestModel& model, const ModelDataset& data);

}  // namespace fmros
