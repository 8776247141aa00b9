#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "moodcam/core/error.hpp"
#include "moodcam/core/types.hpp"
#include "moodcam/core/validation.hpp"

namespace moodcam::cli {

using json = nlohmann::json;

// --- sessions.jsonl ---------------------------------------------------------------------------

inline json frame_to_json(const session& s, const frame_descriptor& f) {
  json landmarks = json::array();
  for (const auto& p : f.landmarks) landmarks.push_back({p.x, p.y});
  return json{{"participant_id", s.participant_id},
              {"session_id", s.session_id},
              {"timestamp_ms", f.timestamp_ms},
              {"tz_offset_minutes", s.tz_offset_minutes},
              {"au", f.au},
              {"smile_p", f.smile_p},
              {"left_eye_open_p", f.left_eye_open_p},
              {"right_eye_open_p", f.right_eye_open_p},
              {"yaw", f.head.yaw},
              {"pitch", f.head.pitch},
              {"roll", f.head.roll},
              {"landmarks", std::move(landmarks)}};
}

inline void write_sessions_jsonl(std::ostream& out, const std::vector<session>& sessions) {
  for (const auto& s : sessions)
    for (const auto& f : s.frames) out << frame_to_json(s, f).dump() << '\n';
}

namespace detail {

template <typename T>
std::optional<T> field(const json& j, const char* name, std::size_t line) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw error(errc::data_error, "line " + std::to_string(line) + ": field '" + name + "' has the wrong type");
  }
}

}  // namespace detail

inline raw_frame_record parse_frame_line(const std::string& text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(errc::data_error, "line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) throw error(errc::data_error, "line " + std::to_string(line) + ": not a JSON object");
  raw_frame_record r;
  r.participant_id = detail::field<std::string>(j, "participant_id", line);
  r.session_id = detail::field<std::string>(j, "session_id", line);
  r.timestamp_ms = detail::field<std::int64_t>(j, "timestamp_ms", line);
  r.tz_offset_minutes = detail::field<std::int32_t>(j, "tz_offset_minutes", line);
  r.au = detail::field<std::vector<double>>(j, "au", line);
  r.smile_p = detail::field<double>(j, "smile_p", line);
  r.left_eye_open_p = detail::field<double>(j, "left_eye_open_p", line);
  r.right_eye_open_p = detail::field<double>(j, "right_eye_open_p", line);
  r.yaw = detail::field<double>(j, "yaw", line);
  r.pitch = detail::field<double>(j, "pitch", line);
  r.roll = detail::field<double>(j, "roll", line);
  if (auto lm = detail::field<std::vector<std::vector<double>>>(j, "landmarks", line)) {
    std::vector<point2> pts;
    pts.reserve(lm->size());
    for (const auto& p : *lm) {
      if (p.size() != 2)
        throw error(errc::data_error, "line " + std::to_string(line) + ": landmark is not an (x, y) pair");
      pts.push_back({p[0], p[1]});
    }
    r.landmarks = std::move(pts);
  }
  return r;
}

/// Reads frame lines, groups them by (participant, session) in line order and validates each
/// session. Sessions come back sorted by participant, start time, then session id.
inline std::vector<session> read_sessions_jsonl(std::istream& in) {
  std::map<std::pair<std::string, std::string>, std::vector<raw_frame_record>> grouped;
  std::map<std::pair<std::string, std::string>, std::size_t> first_line;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto r = parse_frame_line(text, line);
    if (!r.participant_id || !r.session_id)
      throw error(errc::missing_channel, "line " + std::to_string(line) + ": missing participant_id or session_id");
    std::pair key{*r.participant_id, *r.session_id};
    first_line.try_emplace(key, line);
    grouped[key].push_back(std::move(r));
  }
  std::vector<session> out;
  out.reserve(grouped.size());
  for (auto& [key, frames] : grouped) {
    try {
      out.push_back(validate_session(frames));
    } catch (const error& e) {
      throw error(e.code(), "session " + key.second + " (first line " + std::to_string(first_line[key]) +
                                "): " + e.what());
    }
  }
  std::sort(out.begin(), out.end(), [](const session& a, const session& b) {
    return std::make_tuple(std::cref(a.participant_id), a.start_ms(), std::cref(a.session_id)) <
           std::make_tuple(std::cref(b.participant_id), b.start_ms(), std::cref(b.session_id));
  });
  return out;
}

// --- surveys.csv ------------------------------------------------------------------------------

inline constexpr const char* survey_header = "participant_id,timestamp_ms,tz_offset_minutes,valence,arousal";

inline void write_surveys_csv(std::ostream& out, const std::vector<survey_response>& surveys) {
  out << survey_header << '\n';
  for (const auto& s : surveys)
    out << s.participant_id << ',' << s.timestamp_ms << ',' << s.tz_offset_minutes << ',' << s.valence << ','
        << s.arousal << '\n';
}

inline std::vector<survey_response> read_surveys_csv(std::istream& in) {
  std::string text;
  std::size_t line = 1;
  if (!std::getline(in, text)) throw error(errc::data_error, "surveys file is empty");
  if (!text.empty() && text.back() == '\r') text.pop_back();
  if (text != survey_header)
    throw error(errc::data_error, "line 1: expected header '" + std::string(survey_header) + "'");
  std::vector<survey_response> out;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5)
      throw error(errc::data_error, "line " + std::to_string(line) + ": expected 5 columns, got " +
                                        std::to_string(cells.size()));
    survey_response s;
    try {
      std::size_t used = 0;
      auto whole = [&](const std::string& c) {
        if (used != c.size()) throw std::invalid_argument(c);
      };
      s.participant_id = cells[0];
      s.timestamp_ms = std::stoll(cells[1], &used);
      whole(cells[1]);
      s.tz_offset_minutes = std::stoi(cells[2], &used);
      whole(cells[2]);
      s.valence = std::stoi(cells[3], &used);
      whole(cells[3]);
      s.arousal = std::stoi(cells[4], &used);
      whole(cells[4]);
    } catch (const std::logic_error&) {
      throw error(errc::data_error, "line " + std::to_string(line) + ": malformed number");
    }
    if (s.participant_id.empty()) throw error(errc::missing_channel, "line " + std::to_string(line) + ": empty participant_id");
    try {
      validate_survey(s);
    } catch (const error& e) {
      throw error(e.code(), "line " + std::to_string(line) + ": " + e.what());
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const survey_response& a, const survey_response& b) {
    return std::tie(a.participant_id, a.timestamp_ms) < std::tie(b.participant_id, b.timestamp_ms);
  });
  return out;
}

// --- files and digests ------------------------------------------------------------------------

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io_error, "cannot open " + path.string());
  return in;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io_error, "cannot write " + path.string());
  out << content;
  if (!out) throw error(errc::io_error, "write failed for " + path.string());
}

inline std::string sha256_hex(const std::string& data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw error(errc::io_error, "sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

inline std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

}  // namespace moodcam::cli
