#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moodcam/core/error.hpp"

namespace moodcam::features {

struct kinematics {
  std::vector<Eigen::VectorXd> velocity;      // n - 1 entries, per second
  std::vector<Eigen::VectorXd> acceleration;  // n - 2 entries, per second squared
};

/// Forward differences of a time-ordered vector series. Acceleration is empty for two frames.
inline kinematics angular_kinematics(std::span<const std::int64_t> timestamps_ms,
                                     std::span<const Eigen::VectorXd> series) {
  if (timestamps_ms.size() != series.size())
    throw error(errc::length_mismatch, "timestamps and series differ in length");
  const std::size_t n = series.size();
  if (n < 2) throw error(errc::too_few_frames, "velocity needs at least 2 frames");

  std::vector<double> dt(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    dt[t] = static_cast<double>(timestamps_ms[t + 1] - timestamps_ms[t]) / 1000.0;
    if (dt[t] <= 0.0)
      throw error(errc::zero_dt, "timestamps not strictly increasing at frame " +
                                     std::to_string(t + 1));
  }

  kinematics out;
  out.velocity.reserve(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t)
    out.velocity.push_back((series[t + 1] - series[t]) / dt[t]);
  for (std::size_t t = 0; t + 2 < n; ++t)
    out.acceleration.push_back((out.velocity[t + 1] - out.velocity[t]) / dt[t]);
  return out;
}

}  // namespace moodcam::features
