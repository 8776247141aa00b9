#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/types.hpp"

namespace moodcam {

/// A frame record as parsed from input, before any invariant has been checked.
/// Absent channels stay empty; `landmarks` may have the wrong length.
struct raw_frame_record {
  std::optional<std::string> participant_id;
  std::optional<std::string> session_id;
  std::optional<std::int64_t> timestamp_ms;
  std::optional<std::int32_t> tz_offset_minutes;
  std::optional<std::vector<double>> au;
  std::optional<double> smile_p;
  std::optional<double> left_eye_open_p;
  std::optional<double> right_eye_open_p;
  std::optional<double> yaw;
  std::optional<double> pitch;
  std::optional<double> roll;
  std::optional<std::vector<point2>> landmarks;
};

namespace detail {

template <typename T>
const T& require(const std::optional<T>& field, const char* name, std::size_t frame) {
  if (!field)
    throw error(errc::missing_channel,
                std::string("frame ") + std::to_string(frame) + ": missing " + name);
  return *field;
}

inline void check_unit(double v, const std::string& name, std::size_t frame) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw error(errc::out_of_range, "frame " + std::to_string(frame) + ": " + name + " = " +
                                        std::to_string(v) + " outside [0, 1]");
}

inline void check_angle(double v, const char* name, std::size_t frame) {
  if (!std::isfinite(v) || v < -180.0 || v > 180.0)
    throw error(errc::out_of_range, "frame " + std::to_string(frame) + ": " + name + " = " +
                                        std::to_string(v) + " outside [-180, 180]");
}

}  // namespace detail

/// Validates one frame's channels (everything but session membership and ordering).
inline frame_descriptor validate_frame(const raw_frame_record& raw, std::size_t index = 0) {
  using detail::require;
  frame_descriptor f;
  f.timestamp_ms = require(raw.timestamp_ms, "timestamp_ms", index);

  const auto& au = require(raw.au, "au", index);
  if (au.size() != au_count)
    throw error(errc::missing_channel, "frame " + std::to_string(index) + ": au has " +
                                           std::to_string(au.size()) + " of 12 intensities");
  for (std::size_t k = 0; k < au_count; ++k) {
    detail::check_unit(au[k], "au[" + std::to_string(k) + "]", index);
    f.au[k] = au[k];
  }
  f.smile_p = require(raw.smile_p, "smile_p", index);
  f.left_eye_open_p = require(raw.left_eye_open_p, "left_eye_open_p", index);
  f.right_eye_open_p = require(raw.right_eye_open_p, "right_eye_open_p", index);
  detail::check_unit(f.smile_p, "smile_p", index);
  detail::check_unit(f.left_eye_open_p, "left_eye_open_p", index);
  detail::check_unit(f.right_eye_open_p, "right_eye_open_p", index);

  f.head.yaw = require(raw.yaw, "yaw", index);
  f.head.pitch = require(raw.pitch, "pitch", index);
  f.head.roll = require(raw.roll, "roll", index);
  detail::check_angle(f.head.yaw, "yaw", index);
  detail::check_angle(f.head.pitch, "pitch", index);
  detail::check_angle(f.head.roll, "roll", index);

  const auto& lm = require(raw.landmarks, "landmarks", index);
  if (lm.size() != landmark_count)
    throw error(errc::missing_channel, "frame " + std::to_string(index) + ": " +
                                           std::to_string(lm.size()) + " of 133 landmarks");
  for (std::size_t i = 0; i < landmark_count; ++i) {
    if (!std::isfinite(lm[i].x) || !std::isfinite(lm[i].y))
      throw error(errc::out_of_range,
                  "frame " + std::to_string(index) + ": non-finite landmark " + std::to_string(i));
    f.landmarks[i] = lm[i];
  }
  return f;
}

/// Builds a session from the raw frame records of one (participant, session) burst.
inline session validate_session(std::span<const raw_frame_record> raw) {
  if (raw.empty()) throw error(errc::missing_channel, "session has no frames");
  session s;
  s.participant_id = detail::require(raw[0].participant_id, "participant_id", 0);
  s.session_id = detail::require(raw[0].session_id, "session_id", 0);
  s.tz_offset_minutes = detail::require(raw[0].tz_offset_minutes, "tz_offset_minutes", 0);
  s.frames.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& r = raw[i];
    if (detail::require(r.participant_id, "participant_id", i) != s.participant_id)
      throw error(errc::data_error, "frame " + std::to_string(i) + " belongs to participant " +
                                        *r.participant_id + ", session is " + s.participant_id);
    if (detail::require(r.session_id, "session_id", i) != s.session_id)
      throw error(errc::data_error, "frame " + std::to_string(i) + " has foreign session id");
    if (detail::require(r.tz_offset_minutes, "tz_offset_minutes", i) != s.tz_offset_minutes)
      throw error(errc::data_error, "frame " + std::to_string(i) + " changes tz offset");
    s.frames.push_back(validate_frame(r, i));
    if (i > 0 && s.frames[i].timestamp_ms < s.frames[i - 1].timestamp_ms)
      throw error(errc::non_monotonic_time,
                  "frame " + std::to_string(i) + " at " + std::to_string(s.frames[i].timestamp_ms) +
                      " precedes " + std::to_string(s.frames[i - 1].timestamp_ms));
  }
  return s;
}

inline void validate_survey(const survey_response& s) {
  if (s.valence < -4 || s.valence > 4)
    throw error(errc::out_of_range, "valence " + std::to_string(s.valence) + " outside [-4, 4]");
  if (s.arousal < -4 || s.arousal > 4)
    throw error(errc::out_of_range, "arousal " + std::to_string(s.arousal) + " outside [-4, 4]");
}

/// Inverse of validate_session: lowers a session back to raw records.
inline std::vector<raw_frame_record> to_raw(const session& s) {
  std::vector<raw_frame_record> out;
  out.reserve(s.frames.size());
  for (const auto& f : s.frames) {
    raw_frame_record r;
    r.participant_id = s.participant_id;
    r.session_id = s.session_id;
    r.timestamp_ms = f.timestamp_ms;
    r.tz_offset_minutes = s.tz_offset_minutes;
    r.au = std::vector<double>(f.au.begin(), f.au.end());
    r.smile_p = f.smile_p;
    r.left_eye_open_p = f.left_eye_open_p;
    r.right_eye_open_p = f.right_eye_open_p;
    r.yaw = f.head.yaw;
    r.pitch = f.head.pitch;
    r.roll = f.head.roll;
    r.landmarks = std::vector<point2>(f.landmarks.begin(), f.landmarks.end());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace moodcam
