#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/types.hpp"
#include "moodcam/features/geometry.hpp"
#include "moodcam/features/session_features.hpp"
#include "moodcam/learn/lopo.hpp"
#include "moodcam/synth/cohort.hpp"

namespace moodcam::cli {

enum class pca_scope { global, per_fold };

constexpr std::string_view to_string(pca_scope s) { return s == pca_scope::global ? "global" : "per_fold"; }

struct run_config {
  // [data]
  std::filesystem::path sessions_path = "sessions.jsonl";
  std::filesystem::path surveys_path = "surveys.csv";
  std::filesystem::path out_dir = "out";
  // [features]
  std::vector<int> au_ids = default_au_ids();
  int pca_components = 10;
  pca_scope scope = pca_scope::global;
  std::size_t pca_max_rows = 2000;
  std::string centroid = "nose_mean";
  bool include_acceleration = false;
  std::optional<std::filesystem::path> triangle_pairs_path;
  // [windows]
  int window_minutes = 30;
  std::vector<int> lags = {1, 2};
  // [model]
  std::uint64_t seed = 42;
  int n_trees = 100;
  std::size_t max_features = 0;
  int smote_k = 5;
  int inner_folds = 3;
  double threshold = 0.5;
  std::vector<int> max_depth_grid = {3, 5, 8, 0};
  std::vector<int> min_samples_leaf_grid = {1, 5, 10};
  unsigned threads = 1;
  // [ablation]
  std::vector<std::string> ablation_modes = {"remove_group", "only_group"};
  // [synth]
  synth::cohort_config cohort;

  learn::lopo_config lopo() const {
    learn::lopo_config c;
    c.grid.clear();
    for (int d : max_depth_grid)
      for (int l : min_samples_leaf_grid) c.grid.push_back({d, l, 0.0});
    c.n_trees = n_trees;
    c.max_features = max_features;
    c.smote_k = smote_k;
    c.inner_folds = inner_folds;
    c.threshold = threshold;
    c.seed = seed;
    c.threads = threads;
    return c;
  }
};

/// One documented config key.
struct config_key {
  const char* section;
  const char* key;
  const char* default_value;
  const char* description;
};

inline const std::vector<config_key>& config_reference() {
  static const std::vector<config_key> keys = {
      {"data", "sessions", "sessions.jsonl", "Frame records, one JSON object per line (relative to the config file)."},
      {"data", "surveys", "surveys.csv", "Mood surveys CSV: participant_id,timestamp_ms,tz_offset_minutes,valence,arousal."},
      {"data", "out_dir", "out", "Directory for reports, manifests and intermediate files."},
      {"features", "au_ids", "1,2,4,6,7,10,12,14,17,23,24,25", "AU id of each of the 12 intensity slots, in frame order."},
      {"features", "pca_components", "10", "Principal components kept from the raw inter-vector angles."},
      {"features", "pca_scope", "global", "global: one PCA fit on all sessions of the run; per_fold: refit inside each LOPO fold."},
      {"features", "pca_max_rows", "2000", "Frames used to fit PCA (evenly strided subsample); 0 = all frames."},
      {"features", "centroid", "nose_mean", "Facial centroid: nose_mean (mean of nose landmarks) or a landmark index."},
      {"features", "include_acceleration", "false", "Append 10 mean IVA accelerations to the session vector (debug)."},
      {"features", "triangle_pairs", "", "Optional file of 'i,j' landmark pairs replacing the within-region default."},
      {"windows", "window_minutes", "30", "At-moment window: sessions ending this long before a survey are labeled by it."},
      {"windows", "lags", "1,2", "Next-day lags to build and evaluate; any of 1,2,4,8."},
      {"model", "seed", "42", "Single source of randomness (models, folds, and the synthetic cohort)."},
      {"model", "n_trees", "100", "Trees in the feature-selection forest."},
      {"model", "max_features", "0", "Candidate features per forest node; 0 = ceil(sqrt(d))."},
      {"model", "smote_k", "5", "SMOTE nearest neighbours."},
      {"model", "inner_folds", "3", "Grouped inner folds for hyperparameter tuning."},
      {"model", "threshold", "0.5", "Leaf probability at or above which a row is predicted high."},
      {"model", "max_depth_grid", "3,5,8,0", "Tree depths searched; 0 = unlimited."},
      {"model", "min_samples_leaf_grid", "1,5,10", "Minimum leaf sizes searched."},
      {"model", "threads", "1", "Worker threads for folds and ablation cells; results do not depend on it."},
      {"ablation", "modes", "remove_group,only_group", "Ablation modes to emit."},
      {"synth", "n_participants", "25", "Synthetic participants."},
      {"synth", "n_days", "28", "Days per participant."},
      {"synth", "sessions_per_day", "23", "Mean sessions per day (Poisson)."},
      {"synth", "surveys_per_day", "3", "Surveys per day."},
      {"synth", "survey_hours", "10,15,20", "Local survey hours, one per daily survey."},
      {"synth", "survey_jitter_minutes", "45", "Uniform jitter around each survey hour."},
      {"synth", "survey_skip_rate", "0", "Probability that a survey is not answered."},
      {"synth", "missing_day_rate", "0.05", "Probability that a day has no sessions."},
      {"synth", "frames_per_session", "3", "Frames per 10-second burst."},
      {"synth", "start_day", "19723", "First day, as days since 1970-01-01 (19723 = 2024-01-01)."},
      {"synth", "tz_offsets_minutes", "-300,-240,0,60,330,480", "Participant time zones, assigned round-robin."},
      {"synth", "mood_center", "-0.5", "Centre of the latent mood walks."},
      {"synth", "signal_<group>", "smiling=2, action_units=2, others 0", "Effect size planted in a feature group (eye_open, smiling, head_euler, action_units, eye_aspect_ratio, inter_vector_angle)."},
  };
  return keys;
}

inline std::string config_reference_markdown() {
  std::ostringstream out;
  out << "# Configuration reference\n\n"
      << "Configuration files are INI-style: `[section]` headers followed by `key = value` lines. "
         "Lists are comma separated. Comments start with `;`. Unknown keys are rejected.\n";
  std::string section;
  for (const auto& k : config_reference()) {
    if (section != k.section) {
      section = k.section;
      out << "\n## [" << section << "]\n\n| key | default | description |\n|---|---|---|\n";
    }
    out << "| `" << k.key << "` | `" << k.default_value << "` | " << k.description << " |\n";
  }
  return out.str();
}

namespace detail {

inline std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(trim(text));
  T v{};
  in >> v;
  if (in.fail() || !in.eof())
    throw error(errc::config_error, "cannot parse '" + text + "' for " + key);
  return v;
}

template <>
inline bool parse_value<bool>(const std::string& key, const std::string& text) {
  auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw error(errc::config_error, "cannot parse '" + text + "' as boolean for " + key);
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_value<T>(key, item));
  return out;
}

}  // namespace detail

inline std::vector<std::pair<std::size_t, std::size_t>> read_triangle_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_error, "cannot open triangle pair file " + path.string());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto items = detail::split_list(line);
    if (items.size() != 2)
      throw error(errc::config_error, path.string() + ":" + std::to_string(lineno) + ": expected 'i,j'");
    pairs.emplace_back(detail::parse_value<std::size_t>("triangle pair", items[0]),
                       detail::parse_value<std::size_t>("triangle pair", items[1]));
  }
  return pairs;
}

/// Parses an INI config. Relative paths are resolved against the config file's directory.
inline run_config parse_config(std::istream& in, const std::filesystem::path& base_dir = ".") {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw error(errc::config_error, std::string("line ") + std::to_string(e.line()) + ": " + e.message());
  }

  std::set<std::string> known;
  for (const auto& k : config_reference()) known.insert(std::string(k.section) + "." + k.key);
  for (feature_group g : all_feature_groups) known.insert("synth.signal_" + std::string(to_string(g)));
  known.erase("synth.signal_<group>");
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw error(errc::config_error, "key '" + section + "' outside of a section");
    for (const auto& [key, value] : body)
      if (!known.count(section + "." + key))
        throw error(errc::config_error, "unknown key [" + section + "] " + key);
  }

  run_config cfg;
  auto get = [&](const char* section, const char* key) -> std::optional<std::string> {
    auto node = tree.get_child_optional(pt::ptree::path_type(std::string(section) + "/" + key, '/'));
    if (!node) return std::nullopt;
    return detail::trim(node->data());
  };
  auto path = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base_dir / fp;
  };
  auto key_name = [](const char* s, const char* k) { return std::string("[") + s + "] " + k; };
#define MOODCAM_SET(section, key, target, type) \
  if (auto v = get(section, key)) target = detail::parse_value<type>(key_name(section, key), *v)
#define MOODCAM_SET_LIST(section, key, target, type) \
  if (auto v = get(section, key)) target = detail::parse_list<type>(key_name(section, key), *v)

  if (auto v = get("data", "sessions")) cfg.sessions_path = path(*v);
  else cfg.sessions_path = path(cfg.sessions_path.string());
  if (auto v = get("data", "surveys")) cfg.surveys_path = path(*v);
  else cfg.surveys_path = path(cfg.surveys_path.string());
  if (auto v = get("data", "out_dir")) cfg.out_dir = path(*v);
  else cfg.out_dir = path(cfg.out_dir.string());

  MOODCAM_SET_LIST("features", "au_ids", cfg.au_ids, int);
  MOODCAM_SET("features", "pca_components", cfg.pca_components, int);
  if (auto v = get("features", "pca_scope")) {
    if (*v == "global") cfg.scope = pca_scope::global;
    else if (*v == "per_fold") cfg.scope = pca_scope::per_fold;
    else throw error(errc::config_error, "pca_scope must be global or per_fold");
  }
  MOODCAM_SET("features", "pca_max_rows", cfg.pca_max_rows, std::size_t);
  if (auto v = get("features", "centroid")) cfg.centroid = *v;
  MOODCAM_SET("features", "include_acceleration", cfg.include_acceleration, bool);
  if (auto v = get("features", "triangle_pairs"); v && !v->empty()) cfg.triangle_pairs_path = path(*v);

  MOODCAM_SET("windows", "window_minutes", cfg.window_minutes, int);
  MOODCAM_SET_LIST("windows", "lags", cfg.lags, int);

  MOODCAM_SET("model", "seed", cfg.seed, std::uint64_t);
  MOODCAM_SET("model", "n_trees", cfg.n_trees, int);
  MOODCAM_SET("model", "max_features", cfg.max_features, std::size_t);
  MOODCAM_SET("model", "smote_k", cfg.smote_k, int);
  MOODCAM_SET("model", "inner_folds", cfg.inner_folds, int);
  MOODCAM_SET("model", "threshold", cfg.threshold, double);
  MOODCAM_SET_LIST("model", "max_depth_grid", cfg.max_depth_grid, int);
  MOODCAM_SET_LIST("model", "min_samples_leaf_grid", cfg.min_samples_leaf_grid, int);
  MOODCAM_SET("model", "threads", cfg.threads, unsigned);

  if (auto v = get("ablation", "modes")) cfg.ablation_modes = detail::split_list(*v);

  auto& c = cfg.cohort;
  MOODCAM_SET("synth", "n_participants", c.n_participants, int);
  MOODCAM_SET("synth", "n_days", c.n_days, int);
  MOODCAM_SET("synth", "sessions_per_day", c.sessions_per_day, double);
  MOODCAM_SET("synth", "surveys_per_day", c.surveys_per_day, int);
  MOODCAM_SET_LIST("synth", "survey_hours", c.survey_hours, double);
  MOODCAM_SET("synth", "survey_jitter_minutes", c.survey_jitter_minutes, double);
  MOODCAM_SET("synth", "survey_skip_rate", c.survey_skip_rate, double);
  MOODCAM_SET("synth", "missing_day_rate", c.missing_day_rate, double);
  MOODCAM_SET("synth", "frames_per_session", c.frames_per_session, int);
  MOODCAM_SET("synth", "start_day", c.start_day, std::int64_t);
  MOODCAM_SET_LIST("synth", "tz_offsets_minutes", c.tz_offsets_minutes, std::int32_t);
  MOODCAM_SET("synth", "mood_center", c.mood_center, double);
  for (feature_group g : all_feature_groups) {
    std::string key = "signal_" + std::string(to_string(g));
    if (auto v = get("synth", key.c_str())) c.signal[g] = detail::parse_value<double>(key, *v);
  }
#undef MOODCAM_SET
#undef MOODCAM_SET_LIST
  c.seed = cfg.seed;

  // semantic checks
  auto bad = [](const std::string& m) { throw error(errc::config_error, m); };
  if (cfg.au_ids.size() != au_count) bad("au_ids must list exactly 12 ids");
  if (cfg.pca_components < 1) bad("pca_components must be positive");
  if (cfg.window_minutes < 0) bad("window_minutes must be non-negative");
  for (int l : cfg.lags)
    if (l != 1 && l != 2 && l != 4 && l != 8) bad("lags must be drawn from 1,2,4,8");
  if (cfg.n_trees < 1) bad("n_trees must be positive");
  if (cfg.smote_k < 1) bad("smote_k must be positive");
  if (cfg.inner_folds < 2) bad("inner_folds must be at least 2");
  if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0)) bad("threshold must lie in [0, 1]");
  if (cfg.max_depth_grid.empty() || cfg.min_samples_leaf_grid.empty()) bad("hyperparameter grid is empty");
  for (int l : cfg.min_samples_leaf_grid)
    if (l < 1) bad("min_samples_leaf values must be positive");
  for (int d : cfg.max_depth_grid)
    if (d < 0) bad("max_depth values must be non-negative");
  for (const auto& m : cfg.ablation_modes)
    if (m != "remove_group" && m != "only_group") bad("unknown ablation mode " + m);
  if (cfg.centroid != "nose_mean") {
    auto idx = detail::parse_value<std::size_t>("centroid", cfg.centroid);
    if (idx >= landmark_count) bad("centroid index out of range");
  }
  if (cfg.threads == 0) cfg.threads = 1;
  return cfg;
}

inline run_config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config_error, "cannot open config " + path.string());
  return parse_config(in, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

/// Featurizer settings implied by the config.
inline features::featurizer_config featurizer(const run_config& cfg) {
  features::featurizer_config f;
  f.au_ids = cfg.au_ids;
  f.include_acceleration = cfg.include_acceleration;
  f.layout = landmark_layout::make_default();
  f.layout.validate();
  f.triangles = features::default_triangle_spec(f.layout);
  if (cfg.triangle_pairs_path) f.triangles.pairs = read_triangle_pairs(*cfg.triangle_pairs_path);
  if (cfg.centroid != "nose_mean") f.triangles.centroid_indices = {std::stoul(cfg.centroid)};
  f.triangles.validate();
  return f;
}

}  // namespace moodcam::cli
