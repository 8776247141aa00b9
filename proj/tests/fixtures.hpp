#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moodcam/core/types.hpp"
#include "moodcam/synth/face_template.hpp"

namespace fixture {

using namespace moodcam;

inline frame_descriptor frame(std::int64_t t_ms, double smile = 0.5, double scale = 100.0) {
  frame_descriptor f;
  f.timestamp_ms = t_ms;
  for (std::size_t k = 0; k < au_count; ++k) f.au[k] = 0.05 * static_cast<double>(k + 1);
  f.smile_p = smile;
  f.left_eye_open_p = 0.8;
  f.right_eye_open_p = 0.7;
  f.head = {5.0, -3.0, 1.5};
  f.landmarks = synth::place(synth::face_template(), scale, 0.0, {320.0, 240.0});
  return f;
}

inline session make_session(std::string pid, std::string sid, std::int64_t start_ms, int frames = 3,
                            std::int32_t tz = 0, double smile = 0.5) {
  session s;
  s.participant_id = std::move(pid);
  s.session_id = std::move(sid);
  s.tz_offset_minutes = tz;
  for (int i = 0; i < frames; ++i) s.frames.push_back(frame(start_ms + 1000 * i, smile));
  return s;
}

}  // namespace fixture
