#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>

namespace moodcam::cli {

enum class log_level { error = 0, warn = 1, info = 2, debug = 3 };

/// Verbosity from MOODCAM_LOG (error, warn, info, debug); default warn.
inline log_level current_log_level() {
  static const log_level level = [] {
    const char* env = std::getenv("MOODCAM_LOG");
    std::string_view v = env ? env : "";
    if (v == "error") return log_level::error;
    if (v == "info") return log_level::info;
    if (v == "debug") return log_level::debug;
    return log_level::warn;
  }();
  return level;
}

inline void log(log_level level, std::string_view message) {
  if (level > current_log_level()) return;
  static std::mutex mutex;
  static constexpr std::string_view names[] = {"error", "warn", "info", "debug"};
  std::lock_guard lock(mutex);
  std::cerr << "[moodcam " << names[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace moodcam::cli
