#include "fmros/models/tree.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace fmros::detail {

FeatureOrder::FeatureOrder(std::span<const double> features_row_major, std::size_t n_rows,
                           std::size_t n_cols)
    : n_(n_rows), f_(n_cols) {
  assert(features_row_major.size() == n_rows * n_cols);
  columns_.resize(n_ * f_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < f_; ++j) columns_[j * n_ + i] = features_row_major[i * f_ + j];
  }
  order_.resize(n_ * f_);
  for (std::size_t j = 0; j < f_; ++j) {
    std::uint32_t* ord = order_.data() + j * n_;
    std::iota(ord, ord + n_, 0u);
    const double* col = columns_.data() + j * n_;
    std::sort(ord, ord + n_, [col](std::uint32_t a, std::uint32_t b) {
      if (col[a] != col[b]) return col[a] < col[b];
      return a < b;
    });
  }
}

namespace {

// Midpoint threshold with a guard against rounding onto the upper value.
double split_threshold(double lo, double hi) {
  const double mid = lo + 0.5 * (hi - lo);
  return mid < hi ? mid : lo;
}

struct BestSplit {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  std::size_t feature_slot = 0;
  std::size_t left_positions = 0;
};

// Criterion interface: Stats accumulation plus gain/leaf rules. The grow loop
// below walks each candidate feature in ascending id order and thresholds in
// ascending value order; requiring strictly-greater gain makes ties resolve
// to the lowest feature id, then the lowest threshold.
struct VarianceCriterion {
  std::span<const double> y;
  std::span<const double> w;
  std::span<const std::uint32_t> counts;
  double fallback;
  const GrowLimits* limits;

  struct Stats {
    double cnt = 0.0;  // raw sample count incl. multiplicity
    double u = 0.0;    // sum of count*weight
    double uy = 0.0;   // sum of count*weight*y
  };

  bool active(std::uint32_t r) const { return counts[r] > 0; }

  void add(Stats& s, std::uint32_t r) const {
    const double c = static_cast<double>(counts[r]);
    const double cw = c * w[r];
    s.cnt += c;
    s.u += cw;
    s.uy += cw * y[r];
  }

  static Stats minus(const Stats& a, const Stats& b) {
    return {a.cnt - b.cnt, a.u - b.u, a.uy - b.uy};
  }

  static double score(const Stats& s) { return s.u > 0.0 ? s.uy * s.uy / s.u : 0.0; }

  bool can_split(const Stats& s, int depth) const {
    return depth < limits->max_depth && s.cnt >= limits->min_samples_split;
  }

  bool children_ok(const Stats& l, const Stats& r) const {
    return l.cnt >= limits->min_samples_leaf && r.cnt >= limits->min_samples_leaf;
  }

  double gain(const Stats& parent, const Stats& l, const Stats& r) const {
    return score(l) + score(r) - score(parent);
  }

  double leaf_value(const Stats& s, double parent_value) const {
    return s.u > 0.0 ? s.uy / s.u : parent_value;
  }
};

struct BoostCriterion {
  std::span<const double> grad;
  std::span<const double> hess;
  std::span<const std::uint8_t> in_sample;
  double lambda;
  const GrowLimits* limits;

  struct Stats {
    double cnt = 0.0;
    double g = 0.0;
    double h = 0.0;
  };

  bool active(std::uint32_t r) const { return in_sample[r] != 0; }

  void add(Stats& s, std::uint32_t r) const {
    s.cnt += 1.0;
    s.g += grad[r];
    s.h += hess[r];
  }

  static Stats minus(const Stats& a, const Stats& b) {
    return {a.cnt - b.cnt, a.g - b.g, a.h - b.h};
  }

  double score(const Stats& s) const { return s.g * s.g / (s.h + lambda); }

  bool can_split(const Stats& s, int depth) const {
    return depth < limits->max_depth && s.cnt >= limits->min_samples_split;
  }

  bool children_ok(const Stats& l, const Stats& r) const {
    return l.cnt >= limits->min_samples_leaf && r.cnt >= limits->min_samples_leaf &&
           l.h >= limits->min_child_hess && r.h >= limits->min_child_hess;
  }

  double gain(const Stats& parent, const Stats& l, const Stats& r) const {
    return 0.5 * (score(l) + score(r) - score(parent));
  }

  double leaf_value(const Stats& s, double /*parent_value*/) const {
    return -s.g / (s.h + lambda);
  }
};

template <typename Crit>
Tree grow(const FeatureOrder& fo, std::span<const int> features, const Crit& crit,
          double root_parent_value, const GrowLimits& limits) {
  using Stats = typename Crit::Stats;
  const std::size_t n_feats = features.size();

  // Per-feature sorted lists restricted to in-sample rows.
  std::vector<std::uint32_t> lists;
  std::size_t n_active = 0;
  for (std::size_t k = 0; k < n_feats; ++k) {
    const auto full = fo.order(static_cast<std::size_t>(features[k]));
    for (std::uint32_t r : full) {
      if (crit.active(r)) lists.push_back(r);
    }
    if (k == 0) n_active = lists.size();
  }

  Tree tree;
  if (n_active == 0) {
    tree.nodes.push_back(TreeNode{-1, -1, -1, 0.0, root_parent_value});
    return tree;
  }

  std::vector<std::uint32_t> tmp(n_active);
  std::vector<std::uint8_t> side(fo.rows());

  struct WorkItem {
    std::int32_t node;
    std::uint32_t lo, hi;
    int depth;
    double parent_value;
  };
  std::vector<WorkItem> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, 0, static_cast<std::uint32_t>(n_active), 0, root_parent_value});

  while (!stack.empty()) {
    const WorkItem item = stack.back();
    stack.pop_back();

    const std::uint32_t* seg0 = lists.data();  // first feature's segment
    Stats stats{};
    for (std::uint32_t i = item.lo; i < item.hi; ++i) crit.add(stats, seg0[i]);
    const double node_value = crit.leaf_value(stats, item.parent_value);

    BestSplit best;
    if (crit.can_split(stats, item.depth)) {
      for (std::size_t k = 0; k < n_feats; ++k) {
        const int f = features[k];
        const std::uint32_t* seg = lists.data() + k * n_active;
        const auto col = fo.column(static_cast<std::size_t>(f));
        Stats left{};
        for (std::uint32_t i = item.lo; i + 1 < item.hi; ++i) {
          crit.add(left, seg[i]);
          const double v = col[seg[i]];
          const double vn = col[seg[i + 1]];
          if (v == vn) continue;
          const Stats right = Crit::minus(stats, left);
          if (!crit.children_ok(left, right)) continue;
          const double g = crit.gain(stats, left, right);
          if (g > limits.gain_threshold && g > best.gain) {
            best.gain = g;
            best.feature = f;
            best.threshold = split_threshold(v, vn);
            best.feature_slot = k;
            best.left_positions = i + 1 - item.lo;
          }
        }
      }
    }

    TreeNode& node = tree.nodes[static_cast<std::size_t>(item.node)];
    if (best.feature < 0) {
      node.value = node_value;
      continue;
    }

    const auto split_col = fo.column(static_cast<std::size_t>(best.feature));
    for (std::uint32_t i = item.lo; i < item.hi; ++i) {
      const std::uint32_t r = seg0[i];
      side[r] = split_col[r] <= best.threshold ? 1 : 0;
    }

    // Stable partition of every feature list keeps children sorted.
    for (std::size_t k = 0; k < n_feats; ++k) {
      std::uint32_t* seg = lists.data() + k * n_active;
      std::uint32_t out = item.lo;
      std::size_t spill = 0;
      for (std::uint32_t i = item.lo; i < item.hi; ++i) {
        const std::uint32_t r = seg[i];
        if (side[r]) {
          seg[out++] = r;
        } else {
          tmp[spill++] = r;
        }
      }
      std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(spill), seg + out);
    }

    const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
    const auto right_id = left_id + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& nd = tree.nodes[static_cast<std::size_t>(item.node)];
    nd.feature = best.feature;
    nd.threshold = best.threshold;
    nd.left = left_id;
    nd.right = right_id;

    const auto mid = static_cast<std::uint32_t>(item.lo + best.left_positions);
    stack.push_back({right_id, mid, item.hi, item.depth + 1, node_value});
    stack.push_back({left_id, item.lo, mid, item.depth + 1, node_value});
  }
  return tree;
}

}  // namespace

Tree grow_variance_tree(const FeatureOrder& fo, std::span<const int> features,
                        std::span<const double> y, std::span<const double> w,
                        std::span<const std::uint32_t> counts, double fallback_value,
                        const GrowLimits& limits) {
  VarianceCriterion crit{y, w, counts, fallback_value, &limits};
  return grow(fo, features, crit, fallback_value, limits);
}

Tree grow_boost_tree(const FeatureOrder& fo, std::span<const int> features,
                     std::span<const double> grad, std::span<const double> hess,
                     std::span<const std::uint8_t> in_sample, double lambda,
                     const GrowLimits& limits) {
  BoostCriterion crit{grad, hess, in_sample, lambda, &limits};
  return grow(fo, features, crit, 0.0, limits);
}

}  // namespace fmros::detail
