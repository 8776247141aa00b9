#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/seed.hpp"
#include "moodcam/learn/tree.hpp"

namespace moodcam::learn {

struct forest_params {
  int n_trees = 100;
  // Candidate features per node; 0 = ceil(sqrt(d)).
  std::size_t max_features = 0;
  std::uint64_t seed = 0;
};

struct forest_importance {
  std::vector<double> importances;
  int n_trees = 0;
  std::uint64_t seed = 0;
};

/// Mean decrease in Gini impurity over a bootstrapped, random-subspace forest, normalized to 1.
///
/// `column_keys`, when given, fixes a canonical column order (ascending key). Random feature
/// draws and tie breaks happen in that order, so permuting the columns together with their keys
/// permutes the importances and nothing else.
inline forest_importance rf_gini_importance(const matrix& X, std::span<const int> y,
                                            const forest_params& params = {},
                                            std::span<const std::uint64_t> column_keys = {}) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  const std::size_t d = static_cast<std::size_t>(X.cols());
  if (n < 2 || y.size() != n || d == 0)
    throw error(errc::empty_training, "forest needs at least 2 labeled rows");
  std::size_t positives = 0;
  for (int v : y) positives += v == 1 ? 1 : 0;
  if (positives == 0 || positives == n) throw error(errc::single_class, "forest needs both classes");
  if (!column_keys.empty() && column_keys.size() != d)
    throw error(errc::dimension_mismatch, "column key count differs from column count");

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!column_keys.empty())
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return column_keys[a] < column_keys[b]; });

  const std::size_t max_features =
      params.max_features > 0 ? std::min(params.max_features, d)
                              : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

  std::vector<double> total(d, 0.0);
  std::vector<double> per_tree(d);
  tree_params unlimited;
  for (int t = 0; t < params.n_trees; ++t) {
    std::mt19937_64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = draw(rng);

    std::fill(per_tree.begin(), per_tree.end(), 0.0);
    detail::grow_options opts;
    opts.max_features = max_features;
    opts.column_order = order;
    opts.rng = &rng;
    opts.importance = &per_tree;
    detail::tree_grower grower(X, y, unlimited, opts);
    grower.grow(std::move(sample));
    for (std::size_t f = 0; f < d; ++f) total[f] += per_tree[f];
  }

  forest_importance out;
  out.n_trees = params.n_trees;
  out.seed = params.seed;
  out.importances.resize(d);
  double sum = 0.0;
  for (std::size_t f : order) sum += total[f];
  for (std::size_t f = 0; f < d; ++f)
    out.importances[f] = sum > 0.0 ? total[f] / sum : 1.0 / static_cast<double>(d);
  return out;
}

/// Indices whose importance is strictly above the mean (1/d); all indices if none is.
inline std::vector<std::size_t> select_features(const forest_importance& imp) {
  const std::size_t d = imp.importances.size();
  const double mean = 1.0 / static_cast<double>(d);
  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < d; ++f)
    if (imp.importances[f] > mean) keep.push_back(f);
  if (keep.empty()) {
    keep.resize(d);
    std::iota(keep.begin(), keep.end(), std::size_t{0});
  }
  return keep;
}

}  // namespace moodcam::learn
