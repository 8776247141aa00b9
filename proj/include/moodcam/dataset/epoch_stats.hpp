#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "moodcam/core/error.hpp"

namespace moodcam::dataset {

inline constexpr std::size_t stat_count = 8;
inline constexpr std::size_t epoch_count = 4;

inline constexpr std::array<std::string_view, stat_count> stat_names = {
    "min", "max", "mean", "median", "sum", "std", "q1", "q3"};
inline constexpr std::array<std::string_view, epoch_count> epoch_names = {
    "midnight", "morning", "afternoon", "evening"};

/// Linear interpolation between order statistics at rank (n - 1) p. `sorted` must be ascending.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw error(errc::insufficient_data, "quantile of empty sample");
  double rank = (static_cast<double>(sorted.size()) - 1.0) * p;
  auto lo = static_cast<std::size_t>(std::floor(rank));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// min, max, mean, median, sum, sample std (0 for n = 1), q1, q3.
inline std::array<double, stat_count> summary_stats(std::span<const double> values) {
  if (values.empty()) throw error(errc::insufficient_data, "statistics of empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double sum = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  double mean = sum / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  double sd = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {sorted.front(),
          sorted.back(),
          mean,
          quantile_sorted(sorted, 0.5),
          sum,
          sd,
          quantile_sorted(sorted, 0.25),
          quantile_sorted(sorted, 0.75)};
}

}  // namespace moodcam::dataset
