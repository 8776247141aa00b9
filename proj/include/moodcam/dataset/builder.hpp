#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/local_time.hpp"
#include "moodcam/core/types.hpp"
#include "moodcam/dataset/epoch_stats.hpp"
#include "moodcam/features/session_features.hpp"

namespace moodcam::dataset {

using features::featurized_session;

inline int binarize(int score) {
  if (score < -4 || score > 4)
    throw error(errc::out_of_range, "mood score " + std::to_string(score) + " outside [-4, 4]");
  return score < 0 ? 0 : 1;
}

/// Threshold for averaged scores; same rule as binarize.
inline int binarize_mean(double score) {
  if (!(score >= -4.0 && score <= 4.0))
    throw error(errc::out_of_range, "mean mood score outside [-4, 4]");
  return score < 0.0 ? 0 : 1;
}

inline std::string iso_date(std::int64_t day_number) {
  using namespace std::chrono;
  year_month_day ymd{sys_days{days{day_number}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

namespace detail {

inline void check_shared_schema(std::span<const featurized_session> sessions) {
  for (const auto& s : sessions) {
    if (!s.features.schema || s.features.values.size() != s.features.schema->size())
      throw error(errc::schema_mismatch, "session " + s.session_id + " has inconsistent features");
    if (s.features.schema != sessions.front().features.schema &&
        *s.features.schema != *sessions.front().features.schema)
      throw error(errc::schema_mismatch, "session " + s.session_id + " uses a different schema");
  }
}

inline void sort_rows(std::vector<sample_row>& rows) {
  std::sort(rows.begin(), rows.end(), [](const sample_row& a, const sample_row& b) {
    return std::tie(a.participant_id, a.reference_time_ms, a.row_id) <
           std::tie(b.participant_id, b.reference_time_ms, b.row_id);
  });
}

}  // namespace detail

/// One row per session whose end lies in [t_r - window, t_r] for a same-participant survey at t_r;
/// the nearest such survey labels it (earliest on ties). Unmatched sessions are counted.
inline sample_set at_moment_samples(std::span<const featurized_session> sessions,
                                    std::span<const survey_response> surveys,
                                    int window_minutes = 30) {
  sample_set out;
  out.kind = horizon::at_moment;
  if (sessions.empty()) return out;
  detail::check_shared_schema(sessions);
  out.schema = sessions.front().features.schema;

  std::map<std::string, std::vector<const survey_response*>> by_participant;
  for (const auto& s : surveys) by_participant[s.participant_id].push_back(&s);
  for (auto& [id, list] : by_participant)
    std::stable_sort(list.begin(), list.end(), [](auto* a, auto* b) {
      return a->timestamp_ms < b->timestamp_ms;
    });

  const std::int64_t window = static_cast<std::int64_t>(window_minutes) * ms_per_minute;
  for (const auto& s : sessions) {
    auto it = by_participant.find(s.participant_id);
    const survey_response* match = nullptr;
    if (it != by_participant.end()) {
      auto& list = it->second;
      auto pos = std::lower_bound(list.begin(), list.end(), s.end_ms,
                                  [](auto* r, std::int64_t t) { return r->timestamp_ms < t; });
      if (pos != list.end() && (*pos)->timestamp_ms - s.end_ms <= window) match = *pos;
    }
    if (!match) {
      ++out.dropped.unmatched_sessions;
      continue;
    }
    sample_row row;
    row.participant_id = s.participant_id;
    row.row_id = s.participant_id + "/" + s.session_id;
    row.reference_time_ms = s.end_ms;
    row.values = s.features.values;
    row.valence_score = match->valence;
    row.arousal_score = match->arousal;
    row.valence_label = binarize(match->valence);
    row.arousal_label = binarize(match->arousal);
    out.rows.push_back(std::move(row));
  }
  detail::sort_rows(out.rows);
  return out;
}

inline schema_ptr daily_schema(const feature_schema& base) {
  auto schema = std::make_shared<feature_schema>();
  schema->reserve(base.size() * epoch_count * stat_count);
  for (std::size_t e = 0; e < epoch_count; ++e)
    for (const auto& f : base)
      for (std::size_t k = 0; k < stat_count; ++k)
        schema->push_back({f.name + "." + std::string(epoch_names[e]) + "." +
                               std::string(stat_names[k]),
                           f.group});
  return schema;
}

inline schema_ptr lagged_schema(const feature_schema& daily, int lag) {
  auto schema = std::make_shared<feature_schema>();
  schema->reserve(daily.size() * static_cast<std::size_t>(lag));
  for (int l = lag; l >= 1; --l)
    for (const auto& f : daily) schema->push_back({"d-" + std::to_string(l) + "." + f.name, f.group});
  return schema;
}

struct daily_features {
  std::vector<double> values;  // NaN where the epoch had no session
  std::array<bool, epoch_count> coverage{};
};

/// Epoch-by-feature summary statistics of one participant-day. Sessions are placed in the epoch
/// of their local start time.
inline daily_features daily_epoch_features(std::span<const featurized_session* const> day_sessions) {
  if (day_sessions.empty()) throw error(errc::empty_day, "day has no sessions");
  const std::size_t width = day_sessions.front()->features.values.size();
  std::array<std::vector<const featurized_session*>, epoch_count> buckets;
  for (const auto* s : day_sessions) {
    if (s->features.values.size() != width)
      throw error(errc::schema_mismatch, "sessions of one day differ in width");
    buckets[static_cast<std::size_t>(local_epoch(s->start_ms, s->tz_offset_minutes))].push_back(s);
  }

  daily_features out;
  out.values.assign(width * epoch_count * stat_count, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> column;
  for (std::size_t e = 0; e < epoch_count; ++e) {
    out.coverage[e] = !buckets[e].empty();
    if (buckets[e].empty()) continue;
    for (std::size_t f = 0; f < width; ++f) {
      column.clear();
      for (const auto* s : buckets[e]) column.push_back(s->features.values[f]);
      auto stats = summary_stats(column);
      std::copy(stats.begin(), stats.end(),
                out.values.begin() + static_cast<std::ptrdiff_t>((e * width + f) * stat_count));
    }
  }
  return out;
}

/// Per participant, per local day: daily features (if any session) and mean survey scores (if any).
struct day_entry {
  std::optional<daily_features> features;
  std::vector<const survey_response*> surveys;

  std::optional<double> mean_score(target t) const {
    if (surveys.empty()) return std::nullopt;
    double sum = 0.0;
    for (const auto* s : surveys) sum += t == target::valence ? s->valence : s->arousal;
    return sum / static_cast<double>(surveys.size());
  }
};

struct day_table {
  schema_ptr base_schema;
  schema_ptr schema;  // daily schema
  std::map<std::string, std::map<std::int64_t, day_entry>> days;
};

inline day_table build_day_table(std::span<const featurized_session> sessions,
                                 std::span<const survey_response> surveys) {
  day_table table;
  if (!sessions.empty()) {
    detail::check_shared_schema(sessions);
    table.base_schema = sessions.front().features.schema;
    table.schema = daily_schema(*table.base_schema);
  }
  std::map<std::pair<std::string, std::int64_t>, std::vector<const featurized_session*>> grouped;
  for (const auto& s : sessions)
    grouped[{s.participant_id, local_day(s.start_ms, s.tz_offset_minutes)}].push_back(&s);
  for (auto& [key, list] : grouped) {
    std::stable_sort(list.begin(), list.end(),
                     [](auto* a, auto* b) { return a->start_ms < b->start_ms; });
    table.days[key.first][key.second].features = daily_epoch_features(list);
  }
  for (const auto& s : surveys)
    table.days[s.participant_id][local_day(s.timestamp_ms, s.tz_offset_minutes)].surveys.push_back(&s);
  return table;
}

/// One row per participant-day that has both sessions and surveys; labels binarize the day means.
inline sample_set daily_samples(const day_table& table) {
  sample_set out;
  out.kind = horizon::daily;
  out.schema = table.schema;
  for (const auto& [pid, days] : table.days) {
    for (const auto& [day, entry] : days) {
      if (!entry.features) {
        if (!entry.surveys.empty()) ++out.dropped.survey_only_days;
        continue;
      }
      if (entry.surveys.empty()) {
        ++out.dropped.label_less_days;
        continue;
      }
      sample_row row;
      row.participant_id = pid;
      row.row_id = pid + "/" + iso_date(day);
      row.reference_time_ms = day * ms_per_day;
      row.values = entry.features->values;
      row.valence_score = *entry.mean_score(target::valence);
      row.arousal_score = *entry.mean_score(target::arousal);
      row.valence_label = binarize_mean(row.valence_score);
      row.arousal_label = binarize_mean(row.arousal_score);
      for (double v : row.values) out.dropped.masked_cells += std::isnan(v) ? 1 : 0;
      out.rows.push_back(std::move(row));
    }
  }
  detail::sort_rows(out.rows);
  return out;
}

/// Rows for labeled day T whose features concatenate the daily vectors of T-lag .. T-1 (oldest
/// first). Targets with any missing prior day are dropped and counted.
inline sample_set next_day_samples(const day_table& table, int lag_days) {
  if (lag_days != 1 && lag_days != 2 && lag_days != 4 && lag_days != 8)
    throw error(errc::invalid_config, "lag must be one of 1, 2, 4, 8");
  sample_set out;
  out.kind = horizon::next_day;
  out.lag_days = lag_days;
  if (table.schema) out.schema = lagged_schema(*table.schema, lag_days);
  for (const auto& [pid, days] : table.days) {
    for (const auto& [day, entry] : days) {
      if (entry.surveys.empty()) continue;
      std::vector<double> values;
      bool complete = true;
      for (int l = lag_days; l >= 1 && complete; --l) {
        auto prior = days.find(day - l);
        if (prior == days.end() || !prior->second.features) {
          complete = false;
          break;
        }
        const auto& v = prior->second.features->values;
        values.insert(values.end(), v.begin(), v.end());
      }
      if (!complete) {
        ++out.dropped.incomplete_lag_rows;
        continue;
      }
      sample_row row;
      row.participant_id = pid;
      row.row_id = pid + "/" + iso_date(day) + "/lag" + std::to_string(lag_days);
      row.reference_time_ms = day * ms_per_day;
      row.values = std::move(values);
      row.valence_score = *entry.mean_score(target::valence);
      row.arousal_score = *entry.mean_score(target::arousal);
      row.valence_label = binarize_mean(row.valence_score);
      row.arousal_label = binarize_mean(row.arousal_score);
      for (double v : row.values) out.dropped.masked_cells += std::isnan(v) ? 1 : 0;
      out.rows.push_back(std::move(row));
    }
  }
  detail::sort_rows(out.rows);
  return out;
}

}  // namespace moodcam::dataset
