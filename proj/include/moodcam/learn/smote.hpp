#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/learn/tree.hpp"

namespace moodcam::learn {

struct smote_result {
  matrix X;
  std::vector<int> y;
  // For each appended row (in order): the real minority row it starts from and the neighbor
  // it moves towards, as indices into the input, plus the interpolation weight.
  std::vector<std::pair<std::size_t, std::size_t>> parents;
  std::vector<double> weights;
  std::size_t original_rows = 0;
};

/// Appends synthetic minority rows x + lambda (x_nn - x) until both classes have equal counts.
inline smote_result smote(const matrix& X, std::span<const int> y, int k = 5,
                          std::uint64_t seed = 0) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  if (y.size() != n) throw error(errc::length_mismatch, "X and y differ in length");
  std::vector<std::size_t> cls[2];
  for (std::size_t i = 0; i < n; ++i) cls[y[i] == 1 ? 1 : 0].push_back(i);
  if (cls[0].empty() || cls[1].empty()) throw error(errc::single_class, "SMOTE needs both classes");

  smote_result out;
  out.original_rows = n;
  if (cls[0].size() == cls[1].size()) {
    out.X = X;
    out.y.assign(y.begin(), y.end());
    return out;
  }
  const int minority_label = cls[1].size() < cls[0].size() ? 1 : 0;
  const auto& minority = cls[minority_label];
  const std::size_t need = cls[1 - minority_label].size() - minority.size();
  if (minority.size() < 2) throw error(errc::too_few_minority, "SMOTE needs 2 minority rows");

  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, k)), minority.size() - 1);
  // k nearest minority neighbours of each minority row (ties by lower index)
  std::vector<std::vector<std::size_t>> neighbours(minority.size());
  std::vector<std::pair<double, std::size_t>> dist(minority.size());
  for (std::size_t a = 0; a < minority.size(); ++a) {
    for (std::size_t b = 0; b < minority.size(); ++b)
      dist[b] = {b == a ? std::numeric_limits<double>::infinity()
                        : (X.row(minority[a]) - X.row(minority[b])).squaredNorm(),
                 b};
    std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
    for (std::size_t j = 0; j < kk; ++j) neighbours[a].push_back(dist[j].second);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_row(0, minority.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_nn(0, kk - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  out.X.resize(static_cast<Eigen::Index>(n + need), X.cols());
  out.X.topRows(static_cast<Eigen::Index>(n)) = X;
  out.y.assign(y.begin(), y.end());
  out.y.resize(n + need, minority_label);
  for (std::size_t s = 0; s < need; ++s) {
    std::size_t a = pick_row(rng);
    std::size_t b = neighbours[a][pick_nn(rng)];
    double lambda = unit(rng);
    auto base = X.row(minority[a]);
    out.X.row(static_cast<Eigen::Index>(n + s)) = base + lambda * (X.row(minority[b]) - base);
    out.parents.emplace_back(minority[a], minority[b]);
    out.weights.push_back(lambda);
  }
  return out;
}

}  // namespace moodcam::learn
