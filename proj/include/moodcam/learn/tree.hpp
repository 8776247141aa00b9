#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/learn/metrics.hpp"

namespace moodcam::learn {

using matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct tree_params {
  int max_depth = 0;  // 0 = unlimited
  int min_samples_leaf = 1;
  double min_impurity_decrease = 0.0;

  friend bool operator==(const tree_params&, const tree_params&) = default;
};

struct tree_node {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int depth = 0;
  std::array<double, 2> class_counts{};

  bool is_leaf() const { return feature < 0; }
  double probability_high() const {
    double total = class_counts[0] + class_counts[1];
    return total > 0.0 ? class_counts[1] / total : 0.0;
  }
};

/// Binary CART classifier. Internal nodes keep their class counts, so a prediction can stop at
/// any depth and match a tree trained with that max_depth.
class decision_tree {
public:
  decision_tree() = default;
  decision_tree(std::vector<tree_node> nodes, tree_params params)
      : nodes_(std::move(nodes)), params_(params) {}

  const std::vector<tree_node>& nodes() const { return nodes_; }
  const tree_params& params() const { return params_; }

  int depth() const {
    int d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
  }

  template <typename Row>
  double predict_proba(const Row& x, int depth_limit = 0) const {
    int i = 0;
    while (!nodes_[i].is_leaf() && (depth_limit <= 0 || nodes_[i].depth < depth_limit))
      i = x[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
    return nodes_[i].probability_high();
  }

  std::vector<double> predict_proba_all(const matrix& X, int depth_limit = 0) const {
    std::vector<double> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index r = 0; r < X.rows(); ++r) out[r] = predict_proba(X.row(r), depth_limit);
    return out;
  }

private:
  std::vector<tree_node> nodes_;
  tree_params params_;
};

namespace detail {

/// Options shared by plain trees and forest members.
struct grow_options {
  // Candidate features per node; 0 = all.
  std::size_t max_features = 0;
  // Column visiting order; feature ties break towards earlier positions in this order.
  std::span<const std::size_t> column_order;
  std::mt19937_64* rng = nullptr;
  // Accumulates weighted impurity decrease per column (sized d) when non-null.
  std::vector<double>* importance = nullptr;
};

class tree_grower {
public:
  tree_grower(const matrix& X, std::span<const int> y, const tree_params& params,
              const grow_options& opts)
      : X_(X), y_(y), params_(params), opts_(opts) {
    order_.assign(opts.column_order.begin(), opts.column_order.end());
    if (order_.empty()) {
      order_.resize(static_cast<std::size_t>(X.cols()));
      std::iota(order_.begin(), order_.end(), std::size_t{0});
    }
  }

  std::vector<tree_node> grow(std::vector<std::size_t> samples) {
    total_ = static_cast<double>(samples.size());
    nodes_.clear();
    build(samples, 0, samples.size(), 0);
    return std::move(nodes_);
  }

private:
  struct split {
    double gain = -std::numeric_limits<double>::infinity();
    std::size_t feature = 0;
    double threshold = 0.0;
    bool found = false;
  };

  int build(std::vector<std::size_t>& s, std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].depth = depth;
    std::array<double, 2> counts{};
    for (std::size_t i = begin; i < end; ++i) counts[y_[s[i]] == 1 ? 1 : 0] += 1.0;
    nodes_[id].class_counts = counts;

    const std::size_t m = end - begin;
    const double impurity = gini_impurity(counts[0], counts[1]);
    if (impurity == 0.0) return id;
    if (params_.max_depth > 0 && depth >= params_.max_depth) return id;
    if (m < 2 * static_cast<std::size_t>(std::max(1, params_.min_samples_leaf))) return id;

    split best = find_split(s, begin, end, counts, impurity);
    if (!best.found || best.gain + 1e-12 < params_.min_impurity_decrease) return id;

    auto mid = std::stable_partition(s.begin() + begin, s.begin() + end, [&](std::size_t r) {
      return X_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(best.feature)) <= best.threshold;
    });
    const std::size_t cut = static_cast<std::size_t>(mid - s.begin());

    if (opts_.importance) (*opts_.importance)[best.feature] += std::max(0.0, best.gain);
    nodes_[id].feature = static_cast<int>(best.feature);
    nodes_[id].threshold = best.threshold;
    int left = build(s, begin, cut, depth + 1);
    int right = build(s, cut, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::vector<std::size_t> candidates() {
    const std::size_t d = order_.size();
    if (opts_.max_features == 0 || opts_.max_features >= d || !opts_.rng) return order_;
    // partial Fisher-Yates over positions in the canonical column order
    std::vector<std::size_t> pos(d);
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    for (std::size_t i = 0; i < opts_.max_features; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, d - 1);
      std::swap(pos[i], pos[pick(*opts_.rng)]);
    }
    pos.resize(opts_.max_features);
    std::sort(pos.begin(), pos.end());
    std::vector<std::size_t> out;
    out.reserve(pos.size());
    for (std::size_t p : pos) out.push_back(order_[p]);
    return out;
  }

  split find_split(const std::vector<std::size_t>& s, std::size_t begin, std::size_t end,
                   const std::array<double, 2>& counts, double impurity) {
    const std::size_t m = end - begin;
    const double mf = static_cast<double>(m);
    const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, params_.min_samples_leaf));
    split best;
    column_.resize(m);
    for (std::size_t f : candidates()) {
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = s[begin + i];
        column_[i] = {X_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)), y_[r] == 1 ? 1 : 0};
      }
      std::sort(column_.begin(), column_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (column_.front().first == column_.back().first) continue;
      std::array<double, 2> left{};
      for (std::size_t i = 0; i + 1 < m; ++i) {
        left[column_[i].second] += 1.0;
        if (column_[i].first == column_[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = m - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const std::array<double, 2> right = {counts[0] - left[0], counts[1] - left[1]};
        const double child = (static_cast<double>(nl) / mf) * gini_impurity(left[0], left[1]) +
                             (static_cast<double>(nr) / mf) * gini_impurity(right[0], right[1]);
        const double gain = (mf / total_) * (impurity - child);
        if (gain > best.gain) {
          double thr = 0.5 * (column_[i].first + column_[i + 1].first);
          if (thr >= column_[i + 1].first) thr = column_[i].first;
          best = {gain, f, thr, true};
        }
      }
    }
    return best;
  }

  const matrix& X_;
  std::span<const int> y_;
  tree_params params_;
  grow_options opts_;
  std::vector<std::size_t> order_;
  std::vector<tree_node> nodes_;
  std::vector<std::pair<double, int>> column_;
  double total_ = 0.0;
};

}  // namespace detail

/// Greedy CART induction on Gini impurity. Splits are midpoints between consecutive distinct
/// values; ties prefer the lower feature index, then the lower threshold.
inline decision_tree train_decision_tree(const matrix& X, std::span<const int> y,
                                         const tree_params& params = {}) {
  if (X.rows() == 0 || static_cast<std::size_t>(X.rows()) != y.size())
    throw error(errc::empty_training, "training set is empty or mislabeled");
  std::vector<std::size_t> samples(y.size());
  std::iota(samples.begin(), samples.end(), std::size_t{0});
  detail::tree_grower grower(X, y, params, {});
  return decision_tree(grower.grow(std::move(samples)), params);
}

}  // namespace moodcam::learn
