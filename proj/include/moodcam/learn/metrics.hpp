#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "moodcam/core/error.hpp"

namespace moodcam::learn {

/// 1 - sum p_i^2 over (possibly weighted) class counts.
inline double gini_impurity(std::span<const double> class_counts) {
  double total = 0.0;
  for (double c : class_counts) {
    if (c < 0.0) throw error(errc::empty_node, "negative class count");
    total += c;
  }
  if (total <= 0.0) throw error(errc::empty_node, "node has no samples");
  double sq = 0.0;
  for (double c : class_counts) sq += (c / total) * (c / total);
  return 1.0 - sq;
}

inline double gini_impurity(double negatives, double positives) {
  const double counts[2] = {negatives, positives};
  return gini_impurity(counts);
}

/// Mann-Whitney AUC: share of (positive, negative) pairs ranked correctly, ties count one half.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw error(errc::length_mismatch, "scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // 2U accumulated as an integer keeps the result exact.
  std::uint64_t twice_u = 0;
  std::uint64_t negatives_below = 0;
  std::uint64_t n_pos = 0;
  std::uint64_t n_neg = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? pos : neg) += 1;
      ++j;
    }
    twice_u += pos * (2 * negatives_below + neg);
    negatives_below += neg;
    n_pos += pos;
    n_neg += neg;
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) throw error(errc::single_class, "AUC needs both classes");
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

struct confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

inline confusion confusion_matrix(std::span<const int> predictions, std::span<const int> labels,
                                  int positive = 1) {
  if (predictions.size() != labels.size())
    throw error(errc::length_mismatch, "predictions and labels differ in length");
  confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    bool pred = predictions[i] == positive;
    bool truth = labels[i] == positive;
    if (pred && truth) ++c.tp;
    else if (pred) ++c.fp;
    else if (truth) ++c.fn;
    else ++c.tn;
  }
  return c;
}

struct f1_result {
  double value = 0.0;
  // set when precision + recall = 0 and the value is 0 by convention
  bool degenerate = false;
};

inline f1_result f1_from(const confusion& c) {
  double p = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  double r = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  if (p + r == 0.0) return {0.0, true};
  return {2.0 * p * r / (p + r), false};
}

inline f1_result f1(std::span<const int> predictions, std::span<const int> labels, int positive = 1) {
  return f1_from(confusion_matrix(predictions, labels, positive));
}

}  // namespace moodcam::learn
