#pragma once

#include <cmath>
#include <numbers>

#include "moodcam/core/types.hpp"

namespace moodcam::synth {

/// Shape knobs of the canonical face, in face units (half face width = 1, y grows downwards).
struct face_shape {
  double eye_openness = 0.30;  // eye half-height / half-width
  double mouth_lift = 0.0;     // raises mouth corners; positive reads as a smile
};

/// Canonical 133-point face in the default landmark layout.
inline landmark_points face_template(const face_shape& shape = {}) {
  using std::numbers::pi;
  landmark_points pts{};
  auto span = [](region r) { return landmark_layout::default_span(r); };

  {  // face oval
    auto [first, count] = span(region::jawline);
    for (std::size_t k = 0; k < count; ++k) {
      double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(count);
      pts[first + k] = {1.0 * std::cos(t), 0.1 + 1.3 * std::sin(t)};
    }
  }
  auto brow = [&](region r, double side) {
    auto [first, count] = span(r);
    for (std::size_t k = 0; k < count; ++k) {
      double u = static_cast<double>(k) / static_cast<double>(count - 1);
      double x = side * (0.2 + 0.55 * u);
      double y = -0.55 - 0.08 * std::sin(pi * u);
      pts[first + k] = {x, y};
    }
  };
  brow(region::left_eyebrow, -1.0);
  brow(region::right_eyebrow, 1.0);

  auto eye = [&](region r, double side) {
    auto [first, count] = span(r);
    const double cx = side * 0.45, cy = -0.3, a = 0.2, b = a * shape.eye_openness;
    for (std::size_t k = 0; k < count; ++k) {
      double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(count);
      // k = 0 is the outer corner; contour runs over the upper lid first
      pts[first + k] = {cx + side * a * std::cos(t), cy - b * std::sin(t)};
    }
  };
  eye(region::left_eye, -1.0);
  eye(region::right_eye, 1.0);

  {  // outer lip (20) then inner lip (18)
    auto [first, count] = span(region::mouth);
    const std::size_t outer = 20;
    for (std::size_t k = 0; k < count; ++k) {
      bool is_outer = k < outer;
      std::size_t n = is_outer ? outer : count - outer;
      std::size_t j = is_outer ? k : k - outer;
      double t = 2.0 * pi * (static_cast<double>(j) + (is_outer ? 0.0 : 0.5)) / static_cast<double>(n);
      double a = is_outer ? 0.4 : 0.3;
      double b = is_outer ? 0.15 : 0.06;
      double c = std::cos(t);
      pts[first + k] = {a * c, 0.55 + b * std::sin(t) - shape.mouth_lift * c * c};
    }
  }
  {
    auto [first, count] = span(region::nose_center);
    const point2 nose[5] = {{0.0, -0.2}, {0.0, 0.0}, {0.0, 0.2}, {-0.12, 0.25}, {0.12, 0.25}};
    for (std::size_t k = 0; k < count; ++k) pts[first + k] = nose[k];
  }
  {
    auto [first, count] = span(region::cheeks);
    pts[first] = {-0.7, 0.25};
    pts[first + count - 1] = {0.7, 0.25};
  }
  return pts;
}

/// Similarity transform: rotate by `degrees`, scale, then translate.
inline landmark_points place(const landmark_points& face, double scale, double degrees, point2 offset) {
  const double r = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(r), s = std::sin(r);
  landmark_points out{};
  for (std::size_t i = 0; i < face.size(); ++i) {
    const point2 p = face[i];
    out[i] = {offset.x + scale * (c * p.x - s * p.y), offset.y + scale * (s * p.x + c * p.y)};
  }
  return out;
}

}  // namespace moodcam::synth
