#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "moodcam/ablation/harness.hpp"
#include "moodcam/cli/config.hpp"
#include "moodcam/cli/io.hpp"
#include "moodcam/cli/log.hpp"
#include "moodcam/cli/pipeline.hpp"
#include "moodcam/cli/report.hpp"
#include "moodcam/synth/cohort.hpp"

namespace moodcam::cli {

namespace fs = std::filesystem;

/// Files written by one command, in write order.
using written_files = std::vector<fs::path>;

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct loaded_inputs {
  std::vector<session> sessions;
  std::vector<survey_response> surveys;
};

inline loaded_inputs load_inputs(const run_config& cfg) {
  loaded_inputs in;
  {
    auto f = open_input(cfg.sessions_path);
    try {
      in.sessions = read_sessions_jsonl(f);
    } catch (const error& e) {
      throw error(e.code(), cfg.sessions_path.filename().string() + ": " + e.what());
    }
  }
  {
    auto f = open_input(cfg.surveys_path);
    try {
      in.surveys = read_surveys_csv(f);
    } catch (const error& e) {
      throw error(e.code(), cfg.surveys_path.filename().string() + ": " + e.what());
    }
  }
  log(log_level::info, "loaded " + std::to_string(in.sessions.size()) + " sessions and " +
                           std::to_string(in.surveys.size()) + " surveys");
  return in;
}

// --- synth ------------------------------------------------------------------------------------

inline json latents_json(const std::vector<synth::latent_sample>& xs) {
  json out = json::array();
  for (const auto& x : xs)
    out.push_back({{"id", x.id},
                   {"participant_id", x.participant_id},
                   {"timestamp_ms", x.timestamp_ms},
                   {"valence", x.valence},
                   {"arousal", x.arousal}});
  return out;
}

inline json cohort_config_json(const synth::cohort_config& c) {
  json signal = json::object();
  for (feature_group g : all_feature_groups) signal[std::string(to_string(g))] = c.effect(g);
  return {{"n_participants", c.n_participants},
          {"n_days", c.n_days},
          {"sessions_per_day", c.sessions_per_day},
          {"surveys_per_day", c.surveys_per_day},
          {"survey_hours", c.survey_hours},
          {"survey_jitter_minutes", c.survey_jitter_minutes},
          {"survey_skip_rate", c.survey_skip_rate},
          {"missing_day_rate", c.missing_day_rate},
          {"frames_per_session", c.frames_per_session},
          {"burst_ms", c.burst_ms},
          {"start_day", c.start_day},
          {"tz_offsets_minutes", c.tz_offsets_minutes},
          {"mood_center", c.mood_center},
          {"signal", std::move(signal)},
          {"seed", c.seed}};
}

inline written_files cmd_synth(const run_config& cfg, const fs::path& out_dir) {
  cfg.cohort.validate();
  log(log_level::info, "generating cohort with seed " + std::to_string(cfg.cohort.seed));
  auto c = synth::generate_cohort(cfg.cohort);
  std::ostringstream sessions, surveys;
  write_sessions_jsonl(sessions, c.sessions);
  write_surveys_csv(surveys, c.surveys);
  fs::create_directories(out_dir);
  const auto sessions_path = out_dir / "sessions.jsonl";
  const auto surveys_path = out_dir / "surveys.csv";
  const auto manifest_path = out_dir / "manifest.json";
  write_text_file(sessions_path, sessions.str());
  write_text_file(surveys_path, surveys.str());
  json manifest{{"tool", tool_json()},
                {"command", "synth"},
                {"config", cohort_config_json(cfg.cohort)},
                {"outputs",
                 {{"sessions", {{"file", "sessions.jsonl"}, {"sha256", sha256_hex(sessions.str())}}},
                  {"surveys", {{"file", "surveys.csv"}, {"sha256", sha256_hex(surveys.str())}}}}},
                {"counts", {{"sessions", c.sessions.size()}, {"surveys", c.surveys.size()}}},
                {"missing_days", c.missing_days},
                {"survey_latents", latents_json(c.survey_latents)},
                {"session_latents", latents_json(c.session_latents)}};
  write_text_file(manifest_path, dump(manifest));
  return {sessions_path, surveys_path, manifest_path};
}

// --- featurize --------------------------------------------------------------------------------

inline written_files cmd_featurize(const run_config& cfg, const fs::path& out_dir) {
  auto in = load_inputs(cfg);
  auto f = featurize(in.sessions, cfg, nullptr, cfg.threads);
  std::ostringstream csv;
  csv << "participant_id,session_id,start_ms,end_ms,tz_offset_minutes";
  if (!f.sessions.empty())
    for (const auto& spec : *f.sessions.front().features.schema) csv << ',' << spec.name;
  csv << '\n';
  for (const auto& s : f.sessions) {
    csv << s.participant_id << ',' << s.session_id << ',' << s.start_ms << ',' << s.end_ms << ','
        << s.tz_offset_minutes;
    for (double v : s.features.values) csv << ',' << num(v);
    csv << '\n';
  }
  const auto features_path = out_dir / "session_features.csv";
  const auto manifest_path = out_dir / "featurize_manifest.json";
  write_text_file(features_path, csv.str());
  json manifest{{"tool", tool_json()},
                {"command", "featurize"},
                {"config", config_snapshot(cfg)},
                {"inputs", {{"sessions", input_json(cfg.sessions_path)}, {"surveys", input_json(cfg.surveys_path)}}},
                {"featurization", features_json(f, cfg)},
                {"outputs", {{"session_features", {{"file", features_path.filename().string()},
                                                   {"sha256", sha256_hex(csv.str())}}}}}};
  write_text_file(manifest_path, dump(manifest));
  return {features_path, manifest_path};
}

// --- build ------------------------------------------------------------------------------------

inline std::string sample_set_csv(const sample_set& s) {
  std::ostringstream csv;
  csv << "participant_id,row_id,reference_time_ms,valence_score,arousal_score,valence_label,arousal_label";
  for (const auto& spec : *s.schema) csv << ',' << spec.name;
  csv << '\n';
  for (const auto& r : s.rows) {
    csv << r.participant_id << ',' << r.row_id << ',' << r.reference_time_ms << ',' << num(r.valence_score) << ','
        << num(r.arousal_score) << ',' << r.valence_label << ',' << r.arousal_label;
    for (double v : r.values) csv << ',' << num(v);
    csv << '\n';
  }
  return csv.str();
}

inline written_files cmd_build(const run_config& cfg, const fs::path& out_dir) {
  auto in = load_inputs(cfg);
  auto f = featurize(in.sessions, cfg, nullptr, cfg.threads);
  auto sets = build_sample_sets(f.sessions, in.surveys, cfg);
  written_files files;
  json outputs = json::object();
  for (const auto& s : sets) {
    auto text = sample_set_csv(s.samples);
    auto path = out_dir / (s.label + ".csv");
    write_text_file(path, text);
    files.push_back(path);
    outputs[s.label] = {{"file", path.filename().string()}, {"sha256", sha256_hex(text)}};
  }
  const auto manifest_path = out_dir / "build_manifest.json";
  json manifest{{"tool", tool_json()},
                {"command", "build"},
                {"config", config_snapshot(cfg)},
                {"inputs", {{"sessions", input_json(cfg.sessions_path)}, {"surveys", input_json(cfg.surveys_path)}}},
                {"featurization", features_json(f, cfg)},
                {"sample_sets", sets_json(sets)},
                {"outputs", std::move(outputs)}};
  write_text_file(manifest_path, dump(manifest));
  files.push_back(manifest_path);
  return files;
}

// --- run --------------------------------------------------------------------------------------

inline written_files cmd_run(const run_config& cfg, const fs::path& out_dir) {
  auto in = load_inputs(cfg);
  auto run = run_pipeline(in.sessions, in.surveys, cfg);
  auto report = main_report_json(run);
  const auto json_path = out_dir / "report.json";
  const auto md_path = out_dir / "report.md";
  const auto txt_path = out_dir / "report.txt";
  const auto manifest_path = out_dir / "manifest.json";
  write_text_file(json_path, dump(report));
  write_text_file(md_path, render_main(report, true));
  write_text_file(txt_path, render_main(report, false));
  write_text_file(manifest_path, dump(run_manifest("run", cfg, run)));
  return {json_path, md_path, txt_path, manifest_path};
}

// --- ablate -----------------------------------------------------------------------------------

inline written_files cmd_ablate(const run_config& cfg, const fs::path& out_dir) {
  auto in = load_inputs(cfg);
  auto f = featurize(in.sessions, cfg, nullptr, cfg.threads);
  auto sets = ablation_sets(f.sessions, in.surveys, cfg);
  std::vector<ablation::horizon_input> horizons;
  for (const auto& s : sets) horizons.push_back({s.label, &s.samples});
  std::vector<ablation::ablation_grid> grids;
  for (const auto& m : cfg.ablation_modes) {
    auto kind = m == "only_group" ? ablation::mode::only_group : ablation::mode::remove_group;
    log(log_level::info, "ablation mode " + m);
    grids.push_back(ablation::run_ablation(horizons, kind, cfg.lopo()));
  }
  auto report = ablation_report_json(sets, grids);
  const auto json_path = out_dir / "ablation.json";
  const auto md_path = out_dir / "ablation.md";
  const auto txt_path = out_dir / "ablation.txt";
  const auto manifest_path = out_dir / "ablation_manifest.json";
  write_text_file(json_path, dump(report));
  write_text_file(md_path, render_ablation(report, true));
  write_text_file(txt_path, render_ablation(report, false));
  json manifest{{"tool", tool_json()},
                {"command", "ablate"},
                {"config", config_snapshot(cfg)},
                {"seeds", {{"run", cfg.seed}, {"fold_seed_rule", "derive_seed(run, participant_id)"}}},
                {"inputs", {{"sessions", input_json(cfg.sessions_path)}, {"surveys", input_json(cfg.surveys_path)}}},
                {"featurization", features_json(f, cfg)},
                {"ablation_pca_scope", "global"},
                {"sample_sets", sets_json(sets)}};
  write_text_file(manifest_path, dump(manifest));
  return {json_path, md_path, txt_path, manifest_path};
}

// --- report -----------------------------------------------------------------------------------

/// Re-renders a main or ablation report JSON as markdown and aligned text in `out_dir`.
inline written_files cmd_report(const fs::path& report_path, const fs::path& out_dir) {
  json report;
  try {
    report = json::parse(read_file(report_path));
  } catch (const json::parse_error& e) {
    throw error(errc::data_error, report_path.filename().string() + ": " + e.what());
  }
  const auto kind = report.value("table", std::string{});
  std::string md, txt;
  try {
    if (kind == "main") {
      md = render_main(report, true);
      txt = render_main(report, false);
    } else if (kind == "ablation") {
      md = render_ablation(report, true);
      txt = render_ablation(report, false);
    } else {
      throw error(errc::data_error, "unknown report table '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw error(errc::data_error, report_path.filename().string() + ": " + e.what());
  }
  const auto stem = report_path.stem().string();
  const auto md_path = out_dir / (stem + ".md");
  const auto txt_path = out_dir / (stem + ".txt");
  write_text_file(md_path, md);
  write_text_file(txt_path, txt);
  return {md_path, txt_path};
}

}  // namespace moodcam::cli
