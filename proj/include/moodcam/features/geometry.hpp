#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/types.hpp"

namespace moodcam::features {

inline constexpr double default_eye_epsilon = 1e-9;

/// (|p2 - p6| + |p3 - p5|) / (2 |p1 - p4|)
inline double eye_aspect_ratio(point2 p1, point2 p2, point2 p3, point2 p4, point2 p5, point2 p6,
                               double epsilon = default_eye_epsilon) {
  double width = norm(p1 - p4);
  if (width < epsilon) throw error(errc::degenerate_eye, "eye corners coincide");
  return (norm(p2 - p6) + norm(p3 - p5)) / (2.0 * width);
}

inline double eye_aspect_ratio(const landmark_points& pts, const eye_indices& eye,
                               double epsilon = default_eye_epsilon) {
  const auto& p = eye.p;
  return eye_aspect_ratio(pts[p[0]], pts[p[1]], pts[p[2]], pts[p[3]], pts[p[4]], pts[p[5]],
                          epsilon);
}

/// Angle at `c` between rays c->a and c->b, in [0, pi].
inline double inter_vector_angle(point2 c, point2 a, point2 b) {
  point2 u = a - c;
  point2 v = b - c;
  if (norm(u) == 0.0 || norm(v) == 0.0) throw error(errc::degenerate_vector, "zero-length ray");
  // atan2 stays accurate for nearly collinear rays, where acos of the cosine does not
  return std::atan2(std::abs(u.x * v.y - u.y * v.x), u.x * v.x + u.y * v.y);
}

/// Landmark pairs forming triangles with the facial centroid.
struct triangle_spec {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  // centroid = mean of these landmarks
  std::vector<std::size_t> centroid_indices;

  void validate() const {
    if (centroid_indices.empty())
      throw error(errc::invalid_layout, "triangle spec has no centroid landmarks");
    for (std::size_t c : centroid_indices)
      if (c >= landmark_count)
        throw error(errc::invalid_layout, "centroid index out of range: " + std::to_string(c));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [i, j] = pairs[k];
      if (i == j || i >= landmark_count || j >= landmark_count)
        throw error(errc::invalid_layout, "bad triangle pair #" + std::to_string(k) + " (" +
                                              std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }

  point2 centroid(const landmark_points& pts) const {
    point2 sum;
    for (std::size_t c : centroid_indices) sum = sum + pts[c];
    return (1.0 / static_cast<double>(centroid_indices.size())) * sum;
  }
};

/// All within-region unordered pairs (i < j), regions in canonical order; centroid = nose mean.
inline triangle_spec default_triangle_spec(const landmark_layout& layout) {
  triangle_spec spec;
  for (region r : all_regions) {
    auto idx = layout.indices_of(r);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) spec.pairs.emplace_back(idx[a], idx[b]);
  }
  spec.centroid_indices = layout.indices_of(region::nose_center);
  return spec;
}

inline void iva_raw_into(const landmark_points& pts, const triangle_spec& spec,
                         std::span<double> out) {
  if (out.size() != spec.pairs.size())
    throw error(errc::dimension_mismatch, "iva output buffer size");
  point2 c = spec.centroid(pts);
  for (std::size_t k = 0; k < spec.pairs.size(); ++k) {
    auto [i, j] = spec.pairs[k];
    try {
      out[k] = inter_vector_angle(c, pts[i], pts[j]);
    } catch (const error&) {
      throw error(errc::degenerate_vector, "triangle pair #" + std::to_string(k) + " (" +
                                               std::to_string(i) + ", " + std::to_string(j) +
                                               ") touches the centroid");
    }
  }
}

/// One inter-vector angle per triangle pair, in spec order.
inline std::vector<double> iva_raw(const frame_descriptor& frame, const triangle_spec& spec) {
  std::vector<double> out(spec.pairs.size());
  iva_raw_into(frame.landmarks, spec, out);
  return out;
}

}  // namespace moodcam::features
