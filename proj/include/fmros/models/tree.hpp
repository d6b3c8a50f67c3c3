#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fmros {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  std::int32_t left = -1;
  std::int32_t right = -1;
  double threshold = 0.0;
  double value = 0.0;
};

// Binary regression tree; rows with x[feature] <= threshold go left.
struct Tree {
  std::vector<TreeNode> nodes;

  double predict_row(std::span<const double> x) const {
    std::int32_t i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const TreeNode& nd = nodes[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }
};

namespace detail {

// Per-feature row orderings for exhaustive split search: indices sorted by
// (value, row id), built once per fit and filtered down each tree. Features
// are also rearranged column-major here so the split scans stream linearly.
class FeatureOrder {
 public:
  FeatureOrder(std::span<const double> features_row_major, std::size_t n_rows,
               std::size_t n_cols);

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return f_; }
  std::span<const std::uint32_t> order(std::size_t feature) const {
    return {order_.data() + feature * n_, n_};
  }
  std::span<const double> column(std::size_t feature) const {
    return {columns_.data() + feature * n_, n_};
  }

 private:
  std::size_t n_ = 0;
  std::size_t f_ = 0;
  std::vector<double> columns_;
  std::vector<std::uint32_t> order_;
};

struct GrowLimits {
  int max_depth = 8;
  double min_samples_split = 2.0;  // counted with bootstrap multiplicity
  double min_samples_leaf = 1.0;
  double min_child_hess = 0.0;   // boosting only
  double gain_threshold = 0.0;   // split requires gain strictly above this
};

// CART with weighted-variance reduction. counts[i] is the bootstrap
// multiplicity (0 excludes the row); weights enter the split criterion and
// the leaf means. fallback_value seeds leaves whose weighted mass is zero.
Tree grow_variance_tree(const FeatureOrder& fo, std::span<const int> features,
                        std::span<const double> y, std::span<const double> w,
                        std::span<const std::uint32_t> counts, double fallback_value,
                        const GrowLimits& limits);

// Second-order boosting tree on (grad, hess): leaf weight -G/(H+lambda),
// split gain 0.5*(GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)) must exceed
// limits.gain_threshold with both child hessian sums >= min_child_hess.
Tree grow_boost_tree(const FeatureOrder& fo, std::span<const int> features,
                     std::span<const double> grad, std::span<const double> hess,
                     std::span<const std::uint8_t> in_sample, double lambda,
                     const GrowLimits& limits);

}  // namespace detail

}  // namespace fmros
