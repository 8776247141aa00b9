#pragma once

#include <cstdint>

namespace moodcam {

inline constexpr std::int64_t ms_per_minute = 60'000;
inline constexpr std::int64_t ms_per_hour = 60 * ms_per_minute;
inline constexpr std::int64_t ms_per_day = 24 * ms_per_hour;

inline constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

inline constexpr std::int64_t to_local_ms(std::int64_t utc_ms, std::int32_t tz_offset_minutes) {
  return utc_ms + static_cast<std::int64_t>(tz_offset_minutes) * ms_per_minute;
}

/// Local calendar day number (days since 1970-01-01 in local time).
inline constexpr std::int64_t local_day(std::int64_t utc_ms, std::int32_t tz_offset_minutes) {
  return floor_div(to_local_ms(utc_ms, tz_offset_minutes), ms_per_day);
}

/// Six-hour epoch of the local day: 0 midnight, 1 morning, 2 afternoon, 3 evening.
inline constexpr int local_epoch(std::int64_t utc_ms, std::int32_t tz_offset_minutes) {
  std::int64_t local = to_local_ms(utc_ms, tz_offset_minutes);
  std::int64_t in_day = local - floor_div(local, ms_per_day) * ms_per_day;
  return static_cast<int>(in_day / (6 * ms_per_hour));
}

}  // namespace moodcam
