#include "fmros/models/boost.hpp"

#include <algorithm>
#include <cmath>
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

BoostModel fit_boost(const ModelDataset& data, const LossSpec& loss, std::uint64_t seed,
                     const BoostParams& params) {
  const std::size_t n = data.rows();
  if (n == 0) throw std::invalid_argument("fit_boost: empty dataset");

  const std::vector<double> w = loss_weights(loss, data.y);
  const auto total = kernels::weighted_sum(data.y, w);
  if (total.w <= 0.0) throw std::invalid_argument("fit_boost: all loss weights are zero");

  BoostModel model;
  model.params = params;
  model.base_score = total.wy / total.w;
  model.trees.reserve(static_cast<std::size_t>(params.n_estimators));

  detail::FeatureOrder fo(data.features, n, kNumPredictors);
  detail::GrowLimits limits;
  limits.max_depth = params.max_depth;
  limits.min_samples_split = 2.0;
  limits.min_samples_leaf = 1.0;
  limits.min_child_hess = params.min_child_weight;
  limits.gain_threshold = params.gamma;

  std::vector<double> yhat(n, model.base_score);
  std::vector<double> grad(n), hess(n);
  std::vector<std::uint8_t> in_sample(n);
  std::vector<std::uint32_t> idx(n);

  const auto n_sub = std::clamp<std::size_t>(
      static_cast<std::size_t>(params.subsample * static_cast<double>(n)), 1, n);

  for (int round = 0; round < params.n_estimators; ++round) {
    kernels::grad_hess(data.y, yhat, w, grad, hess);
    for (double g : grad) {
      if (!std::isfinite(g)) throw std::runtime_error("fit_boost: non-finite gradient");
    }

    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(round) | (1ULL << 32)));
    if (n_sub == n) {
      std::fill(in_sample.begin(), in_sample.end(), std::uint8_t{1});
    } else {
      std::fill(in_sample.begin(), in_sample.end(), std::uint8_t{0});
      std::iota(idx.begin(), idx.end(), 0u);
      for (std::size_t i = 0; i < n_sub; ++i) {
        const std::size_t j = i + rng.index(n - i);
        std::swap(idx[i], idx[j]);
        in_sample[idx[i]] = 1;
      }
    }
    const auto feats = sample_features(rng, kNumPredictors, params.colsample_bytree);

    Tree tree = detail::grow_boost_tree(fo, feats, grad, hess, in_sample, params.lambda, limits);
    for (std::size_t i = 0; i < n; ++i) {
      yhat[i] += params.eta * tree.predict_row(data.row(i));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<double> predict(const BoostModel& model, std::span<const double> features,
                            std::size_t n_cols) {
  if (n_cols != model.n_features)
    throw std::invalid_argument("predict: feature count mismatch");
  if (n_cols == 0 || features.size() % n_cols != 0)
    throw std::invalid_argument("predict: ragged feature matrix");
  const std::size_t n = features.size() / n_cols;
  std::vector<double> out(n, model.base_score);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> row{features.data() + i * n_cols, n_cols};
    double acc = 0.0;
    for (const Tree& tree : model.trees) acc += tree.predict_row(row);
    out[i] += model.params.eta * acc;
  }
  return out;
}

std::vector<double> predict(const BoostModel& model, const ModelDataset& data) {
  return predict(model, data.features, kNumPredictors);
}

}  // namespace fmros
