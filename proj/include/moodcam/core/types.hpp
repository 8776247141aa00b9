#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moodcam/core/error.hpp"

namespace moodcam {

inline constexpr std::size_t landmark_count = 133;
inline constexpr std::size_t au_count = 12;
inline constexpr std::size_t channel_count = au_count + 1 + 2 + 3 + landmark_count;
static_assert(channel_count == 151);

struct point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const point2&, const point2&) = default;
};

inline point2 operator-(point2 a, point2 b) { return {a.x - b.x, a.y - b.y}; }
inline point2 operator+(point2 a, point2 b) { return {a.x + b.x, a.y + b.y}; }
inline point2 operator*(double s, point2 p) { return {s * p.x, s * p.y}; }
inline double norm(point2 p) { return std::hypot(p.x, p.y); }

enum class region : std::uint8_t {
  nose_center,
  jawline,
  left_eyebrow,
  left_eye,
  right_eyebrow,
  right_eye,
  mouth,
  cheeks,
};

inline constexpr std::array<region, 8> all_regions = {
    region::nose_center, region::jawline,       region::left_eyebrow, region::left_eye,
    region::right_eyebrow, region::right_eye, region::mouth,        region::cheeks};

constexpr std::string_view to_string(region r) {
  switch (r) {
    case region::nose_center: return "nose_center";
    case region::jawline: return "jawline";
    case region::left_eyebrow: return "left_eyebrow";
    case region::left_eye: return "left_eye";
    case region::right_eyebrow: return "right_eyebrow";
    case region::right_eye: return "right_eye";
    case region::mouth: return "mouth";
    case region::cheeks: return "cheeks";
  }
  return "unknown";
}

/// The six EAR points of one eye: p1/p4 are the corners, (p2, p6) and (p3, p5) the vertical pairs.
struct eye_indices {
  std::array<std::size_t, 6> p{};
};

/// Assignment of the 133 landmark indices to facial regions, plus EAR point selection.
///
/// The default layout is contiguous: jawline/face oval 36, left eyebrow 10, right eyebrow 10,
/// left eye 16, right eye 16, mouth 38, nose 5, cheeks 2. Each 16-point eye contour starts at
/// the outer corner and runs counter-clockwise, so contour positions {0, 3, 5, 8, 11, 13}
/// give p1..p6.
struct landmark_layout {
  std::array<region, landmark_count> region_of{};
  eye_indices left_eye;
  eye_indices right_eye;

  struct span_info {
    std::size_t first;
    std::size_t count;
  };

  static constexpr span_info default_span(region r) {
    switch (r) {
      case region::jawline: return {0, 36};
      case region::left_eyebrow: return {36, 10};
      case region::right_eyebrow: return {46, 10};
      case region::left_eye: return {56, 16};
      case region::right_eye: return {72, 16};
      case region::mouth: return {88, 38};
      case region::nose_center: return {126, 5};
      case region::cheeks: return {131, 2};
    }
    return {0, 0};
  }

  static landmark_layout make_default() {
    landmark_layout layout;
    for (region r : all_regions) {
      auto [first, count] = default_span(r);
      for (std::size_t i = first; i < first + count; ++i) layout.region_of[i] = r;
    }
    auto eye = [](std::size_t first) {
      eye_indices e;
      constexpr std::array<std::size_t, 6> contour = {0, 3, 5, 8, 11, 13};
      for (std::size_t k = 0; k < 6; ++k) e.p[k] = first + contour[k];
      return e;
    };
    layout.left_eye = eye(default_span(region::left_eye).first);
    layout.right_eye = eye(default_span(region::right_eye).first);
    return layout;
  }

  std::vector<std::size_t> indices_of(region r) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < landmark_count; ++i)
      if (region_of[i] == r) out.push_back(i);
    return out;
  }

  void validate() const {
    for (const eye_indices* e : {&left_eye, &right_eye}) {
      for (std::size_t a = 0; a < 6; ++a) {
        if (e->p[a] >= landmark_count)
          throw error(errc::invalid_layout, "eye index out of range: " + std::to_string(e->p[a]));
        for (std::size_t b = a + 1; b < 6; ++b)
          if (e->p[a] == e->p[b])
            throw error(errc::invalid_layout, "duplicate eye index " + std::to_string(e->p[a]));
      }
    }
  }
};

using landmark_points = std::array<point2, landmark_count>;

struct head_pose {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;

  friend bool operator==(const head_pose&, const head_pose&) = default;
};

/// One camera frame: the 151-channel record.
struct frame_descriptor {
  std::int64_t timestamp_ms = 0;
  std::array<double, au_count> au{};
  double smile_p = 0.0;
  double left_eye_open_p = 0.0;
  double right_eye_open_p = 0.0;
  head_pose head;
  landmark_points landmarks{};

  friend bool operator==(const frame_descriptor&, const frame_descriptor&) = default;
};

struct session {
  std::string participant_id;
  std::string session_id;
  std::int32_t tz_offset_minutes = 0;
  std::vector<frame_descriptor> frames;

  std::int64_t start_ms() const { return frames.front().timestamp_ms; }
  std::int64_t end_ms() const { return frames.back().timestamp_ms; }

  friend bool operator==(const session&, const session&) = default;
};

struct survey_response {
  std::string participant_id;
  std::int64_t timestamp_ms = 0;
  int valence = 0;
  int arousal = 0;
  std::int32_t tz_offset_minutes = 0;

  friend bool operator==(const survey_response&, const survey_response&) = default;
};

/// AU ids in frame slot order. The 12th slot is not pinned down upstream, so it is configurable.
inline std::vector<int> default_au_ids() { return {1, 2, 4, 6, 7, 10, 12, 14, 17, 23, 24, 25}; }

// Feature groups, in ablation-table row order.
enum class feature_group : std::uint8_t {
  eye_open,
  smiling,
  head_euler,
  action_units,
  eye_aspect_ratio,
  inter_vector_angle,
};

inline constexpr std::array<feature_group, 6> all_feature_groups = {
    feature_group::eye_open,         feature_group::smiling,
    feature_group::head_euler,       feature_group::action_units,
    feature_group::eye_aspect_ratio, feature_group::inter_vector_angle};

constexpr std::string_view to_string(feature_group g) {
  switch (g) {
    case feature_group::eye_open: return "eye_open";
    case feature_group::smiling: return "smiling";
    case feature_group::head_euler: return "head_euler";
    case feature_group::action_units: return "action_units";
    case feature_group::eye_aspect_ratio: return "eye_aspect_ratio";
    case feature_group::inter_vector_angle: return "inter_vector_angle";
  }
  return "unknown";
}

constexpr std::string_view display_name(feature_group g) {
  switch (g) {
    case feature_group::eye_open: return "Eye Open";
    case feature_group::smiling: return "Smiling";
    case feature_group::head_euler: return "Head Euler Angle";
    case feature_group::action_units: return "Action Units";
    case feature_group::eye_aspect_ratio: return "Eye Aspect Ratios";
    case feature_group::inter_vector_angle: return "Inter-Vector Angles";
  }
  return "unknown";
}

inline std::optional<feature_group> parse_feature_group(std::string_view s) {
  for (feature_group g : all_feature_groups)
    if (to_string(g) == s) return g;
  return std::nullopt;
}

struct feature_spec {
  std::string name;
  feature_group group;

  friend bool operator==(const feature_spec&, const feature_spec&) = default;
};

using feature_schema = std::vector<feature_spec>;
using schema_ptr = std::shared_ptr<const feature_schema>;

struct feature_vector {
  std::vector<double> values;
  schema_ptr schema;
};

enum class horizon : std::uint8_t { at_moment, daily, next_day };

constexpr std::string_view to_string(horizon h) {
  switch (h) {
    case horizon::at_moment: return "at_moment";
    case horizon::daily: return "daily";
    case horizon::next_day: return "next_day";
  }
  return "unknown";
}

enum class target : std::uint8_t { valence, arousal };

constexpr std::string_view to_string(target t) { return t == target::valence ? "valence" : "arousal"; }

/// One labeled row. NaN entries in `values` are masked cells awaiting imputation.
struct sample_row {
  std::string participant_id;
  std::string row_id;
  std::int64_t reference_time_ms = 0;
  std::vector<double> values;
  int valence_label = 0;
  int arousal_label = 0;
  double valence_score = 0.0;
  double arousal_score = 0.0;

  int label(target t) const { return t == target::valence ? valence_label : arousal_label; }
};

struct attrition {
  std::size_t unmatched_sessions = 0;
  std::size_t label_less_days = 0;
  std::size_t survey_only_days = 0;
  std::size_t incomplete_lag_rows = 0;
  std::size_t masked_cells = 0;
};

struct sample_set {
  horizon kind = horizon::at_moment;
  int lag_days = 0;
  schema_ptr schema;
  std::vector<sample_row> rows;
  attrition dropped;

  std::size_t width() const { return schema ? schema->size() : 0; }
};

}  // namespace moodcam
