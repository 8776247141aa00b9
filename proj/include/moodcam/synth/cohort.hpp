#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/local_time.hpp"
#include "moodcam/core/seed.hpp"
#include "moodcam/core/types.hpp"
#include "moodcam/synth/face_template.hpp"

namespace moodcam::synth {

struct cohort_config {
  int n_participants = 25;
  int n_days = 28;
  double sessions_per_day = 23.0;  // Poisson mean
  int surveys_per_day = 3;
  std::vector<double> survey_hours = {10.0, 15.0, 20.0};
  double survey_jitter_minutes = 45.0;
  double survey_skip_rate = 0.0;
  double missing_day_rate = 0.05;  // days without any session
  int frames_per_session = 3;
  std::int64_t burst_ms = 10'000;
  std::int64_t start_day = 19'723;  // 2024-01-01
  std::vector<std::int32_t> tz_offsets_minutes = {-300, -240, 0, 60, 330, 480};
  // Effect size per feature group, in units of that group's per-session noise.
  std::map<feature_group, double> signal = {{feature_group::smiling, 2.0},
                                            {feature_group::action_units, 2.0}};
  // Latent mood centre; -0.5 puts the rounding boundary of the 0 threshold at the centre.
  double mood_center = -0.5;
  std::uint64_t seed = 7;

  double effect(feature_group g) const {
    auto it = signal.find(g);
    return it == signal.end() ? 0.0 : it->second;
  }

  void validate() const {
    auto bad = [](const std::string& what) { throw error(errc::invalid_config, what); };
    if (n_participants < 1) bad("n_participants must be positive");
    if (n_days < 1) bad("n_days must be positive");
    if (!(sessions_per_day > 0.0) || !std::isfinite(sessions_per_day)) bad("sessions_per_day must be positive");
    if (surveys_per_day < 1) bad("surveys_per_day must be positive");
    if (survey_hours.size() != static_cast<std::size_t>(surveys_per_day))
      bad("survey_hours must list surveys_per_day entries");
    for (double h : survey_hours)
      if (!(h >= 0.0 && h < 24.0)) bad("survey hours must lie in [0, 24)");
    if (!(survey_jitter_minutes >= 0.0)) bad("survey_jitter_minutes must be non-negative");
    if (!(survey_skip_rate >= 0.0 && survey_skip_rate < 1.0)) bad("survey_skip_rate must lie in [0, 1)");
    if (!(missing_day_rate >= 0.0 && missing_day_rate < 1.0)) bad("missing_day_rate must lie in [0, 1)");
    if (frames_per_session < 1) bad("frames_per_session must be positive");
    if (burst_ms < 0) bad("burst_ms must be non-negative");
    if (tz_offsets_minutes.empty()) bad("tz_offsets_minutes must not be empty");
    for (const auto& [g, e] : signal)
      if (!std::isfinite(e)) bad("signal effect sizes must be finite");
    if (!std::isfinite(mood_center)) bad("mood_center must be finite");
  }
};

struct latent_sample {
  std::string id;  // survey or session id
  std::string participant_id;
  std::int64_t timestamp_ms = 0;
  double valence = 0.0;
  double arousal = 0.0;
};

struct cohort {
  std::vector<session> sessions;
  std::vector<survey_response> surveys;
  std::vector<latent_sample> survey_latents;
  std::vector<latent_sample> session_latents;
  std::vector<std::string> missing_days;  // "participant/yyyy-mm-dd"
};

namespace detail {

inline double quantize(double x, double per_unit) { return std::round(x * per_unit) / per_unit; }

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline std::string pad(const char* prefix, int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, value);
  return buf;
}

inline constexpr std::int64_t grid_ms = 15 * ms_per_minute;

/// Daily AR(1) level plus an intraday Ornstein-Uhlenbeck wiggle on a 15-minute grid, clamped to
/// the survey scale.
class mood_walk {
public:
  mood_walk(std::mt19937_64& rng, int n_days, double center) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double baseline = center + 0.8 * gauss(rng);
    const double phi = 0.6, day_sd = 1.0;
    const double rho = 0.97, step_sd = 0.25;
    const std::int64_t steps_per_day = ms_per_day / grid_ms;
    double level = baseline + day_sd / std::sqrt(1 - phi * phi) * gauss(rng);
    double wiggle = step_sd / std::sqrt(1 - rho * rho) * gauss(rng);
    values_.reserve(static_cast<std::size_t>(n_days * steps_per_day));
    for (int d = 0; d < n_days; ++d) {
      if (d > 0) level = baseline + phi * (level - baseline) + day_sd * gauss(rng);
      for (std::int64_t s = 0; s < steps_per_day; ++s) {
        wiggle = rho * wiggle + step_sd * gauss(rng);
        values_.push_back(std::clamp(level + wiggle, -4.0, 4.0));
      }
    }
  }

  /// Value at local time `local_ms` measured from the start of the first day.
  double at(std::int64_t local_ms) const {
    auto i = std::clamp<std::int64_t>(local_ms / grid_ms, 0, static_cast<std::int64_t>(values_.size()) - 1);
    return values_[static_cast<std::size_t>(i)];
  }

private:
  std::vector<double> values_;
};

struct participant_traits {
  double smile_base;
  std::array<double, au_count> au_base;
  double eye_open_base;
  double ear_base;
  double face_scale;
};

// AU slot loadings on (valence, arousal) for the default id list 1,2,4,6,7,10,12,14,17,23,24,25.
inline constexpr std::array<std::array<double, 2>, au_count> au_loadings = {{
    {0.0, 0.7},   // AU1
    {0.0, 0.7},   // AU2
    {-0.8, 0.0},  // AU4
    {1.0, 0.0},   // AU6
    {0.0, 0.3},   // AU7
    {-0.3, 0.0},  // AU10
    {1.0, 0.0},   // AU12
    {0.3, 0.0},   // AU14
    {-0.4, 0.0},  // AU17
    {-0.3, 0.0},  // AU23
    {-0.3, 0.0},  // AU24
    {0.0, 0.5},   // AU25
}};

}  // namespace detail

/// Generates a synthetic cohort whose frame channels shift with the latent mood at capture time
/// according to `config.signal`.
inline cohort generate_cohort(const cohort_config& config) {
  config.validate();
  cohort out;
  for (int p = 0; p < config.n_participants; ++p) {
    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(p)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::string pid = detail::pad("P", p + 1, 2);
    const std::int32_t tz = config.tz_offsets_minutes[static_cast<std::size_t>(p) % config.tz_offsets_minutes.size()];

    detail::mood_walk valence(rng, config.n_days, config.mood_center);
    detail::mood_walk arousal(rng, config.n_days, config.mood_center);
    detail::participant_traits traits{};
    traits.smile_base = -1.0 + 0.5 * gauss(rng);
    for (auto& a : traits.au_base) a = -1.5 + 0.5 * gauss(rng);
    traits.eye_open_base = 1.5 + 0.4 * gauss(rng);
    traits.ear_base = 0.30 + 0.02 * gauss(rng);
    traits.face_scale = 120.0 + 10.0 * gauss(rng);

    const std::int64_t first_local_ms = config.start_day * ms_per_day;
    auto z = [&](const detail::mood_walk& w, std::int64_t local_ms) {
      return (w.at(local_ms - first_local_ms) - config.mood_center) / 2.0;
    };

    int session_counter = 0;
    std::poisson_distribution<int> session_count(config.sessions_per_day);
    for (int d = 0; d < config.n_days; ++d) {
      const std::int64_t day = config.start_day + d;
      const bool missing = unit(rng) < config.missing_day_rate;

      // surveys
      for (int k = 0; k < config.surveys_per_day; ++k) {
        double jitter = (2.0 * unit(rng) - 1.0) * config.survey_jitter_minutes;
        bool skip = unit(rng) < config.survey_skip_rate;
        if (skip) continue;
        std::int64_t local = day * ms_per_day +
                             static_cast<std::int64_t>(std::llround((config.survey_hours[static_cast<std::size_t>(k)] * 60.0 + jitter) * ms_per_minute));
        local = std::clamp(local, day * ms_per_day, (day + 1) * ms_per_day - 1);
        double v = valence.at(local - first_local_ms);
        double a = arousal.at(local - first_local_ms);
        survey_response s;
        s.participant_id = pid;
        s.timestamp_ms = local - static_cast<std::int64_t>(tz) * ms_per_minute;
        s.tz_offset_minutes = tz;
        s.valence = static_cast<int>(std::clamp(std::lround(v), -4L, 4L));
        s.arousal = static_cast<int>(std::clamp(std::lround(a), -4L, 4L));
        out.survey_latents.push_back({pid + "/survey" + std::to_string(out.surveys.size()), pid, s.timestamp_ms, v, a});
        out.surveys.push_back(s);
      }

      if (missing) {
        out.missing_days.push_back(pid + "/" + std::to_string(day));
        continue;
      }

      // sessions: ~5% overnight, the rest spread over 06:00-24:00
      int n_sessions = session_count(rng);
      std::vector<std::int64_t> starts;
      for (int i = 0; i < n_sessions; ++i) {
        double hour = unit(rng) < 0.05 ? 6.0 * unit(rng) : 6.0 + 18.0 * unit(rng);
        std::int64_t local = day * ms_per_day + static_cast<std::int64_t>(hour * ms_per_hour);
        local = std::min(local, (day + 1) * ms_per_day - config.burst_ms - 1);
        starts.push_back(local);
      }
      std::sort(starts.begin(), starts.end());

      for (std::int64_t local_start : starts) {
        session s;
        s.participant_id = pid;
        s.session_id = pid + "-" + detail::pad("S", ++session_counter, 4);
        s.tz_offset_minutes = tz;
        const double zv = z(valence, local_start);
        const double za = z(arousal, local_start);
        out.session_latents.push_back({s.session_id, pid, local_start - static_cast<std::int64_t>(tz) * ms_per_minute,
                                       valence.at(local_start - first_local_ms),
                                       arousal.at(local_start - first_local_ms)});

        // session-level state
        const double smile_level = traits.smile_base + gauss(rng) + config.effect(feature_group::smiling) * zv;
        std::array<double, au_count> au_level{};
        for (std::size_t k = 0; k < au_count; ++k) {
          const auto& ld = detail::au_loadings[k];
          au_level[k] = traits.au_base[k] + gauss(rng) +
                        config.effect(feature_group::action_units) * (ld[0] * zv + ld[1] * za);
        }
        const double eye_level = traits.eye_open_base + gauss(rng) + config.effect(feature_group::eye_open) * za;
        const head_pose head_level{10.0 * gauss(rng),
                                   8.0 * gauss(rng) + 8.0 * config.effect(feature_group::head_euler) * za,
                                   5.0 * gauss(rng)};
        const double openness = std::clamp(
            traits.ear_base + 0.04 * gauss(rng) + 0.04 * config.effect(feature_group::eye_aspect_ratio) * za,
            0.12, 0.6);
        const double lift = 0.03 * gauss(rng) + 0.03 * config.effect(feature_group::inter_vector_angle) * zv;
        const double scale = traits.face_scale * (1.0 + 0.05 * gauss(rng));
        const point2 center{240.0 + 15.0 * gauss(rng), 320.0 + 15.0 * gauss(rng)};

        for (int f = 0; f < config.frames_per_session; ++f) {
          frame_descriptor fr;
          fr.timestamp_ms = local_start - static_cast<std::int64_t>(tz) * ms_per_minute +
                            (config.frames_per_session > 1 ? config.burst_ms * f / (config.frames_per_session - 1) : 0);
          for (std::size_t k = 0; k < au_count; ++k)
            fr.au[k] = detail::quantize(detail::sigmoid(au_level[k] + 0.3 * gauss(rng)), 1e4);
          fr.smile_p = detail::quantize(detail::sigmoid(smile_level + 0.3 * gauss(rng)), 1e4);
          fr.left_eye_open_p = detail::quantize(detail::sigmoid(eye_level + 0.3 * gauss(rng)), 1e4);
          fr.right_eye_open_p = detail::quantize(detail::sigmoid(eye_level + 0.3 * gauss(rng)), 1e4);
          fr.head.yaw = detail::quantize(std::clamp(head_level.yaw + gauss(rng), -90.0, 90.0), 100);
          fr.head.pitch = detail::quantize(std::clamp(head_level.pitch + gauss(rng), -90.0, 90.0), 100);
          fr.head.roll = detail::quantize(std::clamp(head_level.roll + 0.5 * gauss(rng), -90.0, 90.0), 100);

          face_shape shape{std::clamp(openness + 0.01 * gauss(rng), 0.1, 0.6), lift + 0.005 * gauss(rng)};
          auto face = place(face_template(shape), scale, fr.head.roll,
                            {center.x + gauss(rng), center.y + gauss(rng)});
          for (auto& pt : face) {
            pt.x = detail::quantize(pt.x + 0.3 * gauss(rng), 100);
            pt.y = detail::quantize(pt.y + 0.3 * gauss(rng), 100);
          }
          fr.landmarks = face;
          s.frames.push_back(fr);
        }
        out.sessions.push_back(std::move(s));
      }
    }
  }
  return out;
}

}  // namespace moodcam::synth
