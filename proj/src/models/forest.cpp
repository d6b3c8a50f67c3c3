#include "fmros/models/forest.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fmros/kernels/kernels.hpp"
#include "fmros/util/rng.hpp"

namespace fmros {

namespace {

std::vector<int> sample_features(Rng& rng, std::size_t n_features, double fraction) {
  auto k = static_cast<std::size_t>(fraction * static_cast<double>(n_features));
  k = std::clamp<std::size_t>(k, 1, n_features);
  std::vector<int> all(n_features);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.index(n_features - i);
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

ForestModel fit_forest(const ModelDataset& data, std::span<const double> w, std::uint64_t seed,
                       const ForestParams& params) {
  const std::size_t n = data.rows();
  if (n == 0) throw std::invalid_argument("fit_forest: empty dataset");
  if (w.size() != n) throw std::invalid_argument("fit_forest: weight length mismatch");
  for (double wi : w) {
    if (wi < 0.0) throw std::invalid_argument("fit_forest: negative weight");
  }
  const auto total = kernels::weighted_sum(data.y, w);
  if (total.w <= 0.0) throw std::invalid_argument("fit_forest: all weights are zero");
  const double global_mean = total.wy / total.w;

  detail::FeatureOrder fo(data.features, n, kNumPredictors);
  detail::GrowLimits limits;
  limits.max_depth = params.max_depth;
  limits.min_samples_split = params.min_samples_split;
  limits.min_samples_leaf = params.min_samples_leaf;

  ForestModel model;
  model.params = params;
  model.trees.reserve(static_cast<std::size_t>(params.n_estimators));

  std::vector<std::uint32_t> counts(n);
  for (int t = 0; t < params.n_estimators; ++t) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(t)));
    if (params.bootstrap) {
      std::fill(counts.begin(), counts.end(), 0u);
      for (std::size_t i = 0; i < n; ++i) ++counts[rng.index(n)];
    } else {
      std::fill(counts.begin(), counts.end(), 1u);
    }
    const auto feats = sample_features(rng, kNumPredictors, params.max_features);
    model.trees.push_back(
        detail::grow_variance_tree(fo, feats, data.y, w, counts, global_mean, limits));
  }
  return model;
}

std::vector<double> predict(const ForestModel& model, std::span<const double> features,
                            std::size_t n_cols) {
  if (n_cols != model.n_features)
    throw std::invalid_argument("predict: feature count mismatch");
  if (n_cols == 0 || features.size() % n_cols != 0)
    throw std::invalid_argument("predict: ragged feature matrix");
  const std::size_t n = features.size() / n_cols;
  std::vector<double> out(n, 0.0);
  if (model.trees.empty()) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> row{features.data() + i * n_cols, n_cols};
    double acc = 0.0;
    for (const Tree& tree : model.trees) acc += tree.predict_row(row);
    out[i] = acc / static_cast<double>(model.trees.size());
  }
  return out;
}

std::vector<double> predict(const ForestModel& model, const ModelDataset& data) {
  return predict(model, data.features, kNumPredictors);
}

}  // namespace fmros
