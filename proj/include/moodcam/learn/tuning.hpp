#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/learn/metrics.hpp"
#include "moodcam/learn/tree.hpp"

namespace moodcam::learn {

inline std::vector<tree_params> default_grid() {
  std::vector<tree_params> grid;
  for (int depth : {3, 5, 8, 0})
    for (int leaf : {1, 5, 10}) grid.push_back({depth, leaf, 0.0});
  return grid;
}

struct tuning_result {
  tree_params best;
  std::vector<double> mean_auc;  // per grid point; NaN when no inner fold could be scored
  bool row_level_fallback = false;
  int inner_folds = 0;
};

namespace detail {

inline bool simpler_or_equal_tie(const tree_params& a, const tree_params& b) {
  // smaller max_depth (0 = unlimited counts as largest), then larger min_samples_leaf
  auto depth = [](const tree_params& p) {
    return p.max_depth <= 0 ? std::numeric_limits<int>::max() : p.max_depth;
  };
  if (depth(a) != depth(b)) return depth(a) < depth(b);
  return a.min_samples_leaf > b.min_samples_leaf;
}

/// Fold id per row: groups shuffled then dealt round-robin, or a stratified row split.
inline std::vector<int> inner_fold_assignment(std::span<const int> y, std::span<const std::size_t> groups,
                                              int folds, std::uint64_t seed, bool& fallback,
                                              int& used_folds) {
  std::vector<std::size_t> unique(groups.begin(), groups.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::mt19937_64 rng(seed);
  std::vector<int> fold(y.size());
  if (unique.size() >= 2) {
    fallback = false;
    used_folds = std::min<int>(folds, static_cast<int>(unique.size()));
    std::shuffle(unique.begin(), unique.end(), rng);
    std::map<std::size_t, int> of;
    for (std::size_t i = 0; i < unique.size(); ++i) of[unique[i]] = static_cast<int>(i % used_folds);
    for (std::size_t i = 0; i < y.size(); ++i) fold[i] = of[groups[i]];
    return fold;
  }
  fallback = true;
  used_folds = folds;
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] == c) rows.push_back(i);
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t i = 0; i < rows.size(); ++i) fold[rows[i]] = static_cast<int>(i % folds);
  }
  return fold;
}

}  // namespace detail

/// Grouped k-fold search for the grid point with the best mean inner AUC. Ties go to the simpler
/// model. Rows with `scored[i] == 0` (e.g. synthetic) train but are never validated on.
/// With fewer than two groups the split falls back to stratified row-level folds.
inline tuning_result tune_hyperparams(const matrix& X, std::span<const int> y,
                                      std::span<const std::size_t> groups,
                                      const std::vector<tree_params>& grid, std::uint64_t seed,
                                      std::span<const std::uint8_t> scored = {}, int folds = 3) {
  if (grid.empty()) throw error(errc::invalid_config, "hyperparameter grid is empty");
  if (static_cast<std::size_t>(X.rows()) != y.size() || groups.size() != y.size())
    throw error(errc::length_mismatch, "tuning inputs differ in length");
  tuning_result out;
  out.mean_auc.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  if (grid.size() == 1) {
    out.best = grid.front();
    return out;
  }

  int used = 0;
  auto fold = detail::inner_fold_assignment(y, groups, folds, seed, out.row_level_fallback, used);
  out.inner_folds = used;

  // Depth-limited trees are prefixes of the deeper tree with the same leaf rule, so one tree per
  // (min_samples_leaf, min_impurity_decrease) serves every depth.
  std::vector<double> sum(grid.size(), 0.0);
  std::vector<int> count(grid.size(), 0);
  for (int f = 0; f < used; ++f) {
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> valid_rows;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (fold[i] != f) train_rows.push_back(static_cast<Eigen::Index>(i));
      else if (scored.empty() || scored[i]) valid_rows.push_back(static_cast<Eigen::Index>(i));
    }
    if (train_rows.empty() || valid_rows.empty()) continue;
    std::vector<int> y_train, y_valid;
    for (auto r : train_rows) y_train.push_back(y[r]);
    for (auto r : valid_rows) y_valid.push_back(y[r]);
    if (std::count(y_valid.begin(), y_valid.end(), 1) == 0 ||
        std::count(y_valid.begin(), y_valid.end(), 0) == 0)
      continue;
    matrix Xt = X(train_rows, Eigen::all);
    matrix Xv = X(valid_rows, Eigen::all);

    std::vector<bool> done(grid.size(), false);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (done[g]) continue;
      tree_params shared = grid[g];
      for (std::size_t h = g; h < grid.size(); ++h) {
        if (grid[h].min_samples_leaf != shared.min_samples_leaf ||
            grid[h].min_impurity_decrease != shared.min_impurity_decrease)
          continue;
        if (grid[h].max_depth <= 0 || shared.max_depth <= 0) shared.max_depth = 0;
        else shared.max_depth = std::max(shared.max_depth, grid[h].max_depth);
      }
      auto tree = train_decision_tree(Xt, y_train, shared);
      for (std::size_t h = g; h < grid.size(); ++h) {
        if (grid[h].min_samples_leaf != shared.min_samples_leaf ||
            grid[h].min_impurity_decrease != shared.min_impurity_decrease)
          continue;
        auto scores = tree.predict_proba_all(Xv, grid[h].max_depth);
        sum[h] += auc(scores, y_valid);
        ++count[h];
        done[h] = true;
      }
    }
  }

  std::size_t best = grid.size();
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (count[g] == 0) continue;
    out.mean_auc[g] = sum[g] / count[g];
    if (best == grid.size() || out.mean_auc[g] > best_score ||
        (out.mean_auc[g] == best_score && detail::simpler_or_equal_tie(grid[g], grid[best]))) {
      best = g;
      best_score = out.mean_auc[g];
    }
  }
  if (best == grid.size()) {
    // nothing scoreable: simplest configuration
    best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
      if (detail::simpler_or_equal_tie(grid[g], grid[best])) best = g;
  }
  out.best = grid[best];
  return out;
}

}  // namespace moodcam::learn
