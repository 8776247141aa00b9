#pragma once

#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "moodcam/ablation/harness.hpp"
#include "moodcam/cli/io.hpp"
#include "moodcam/cli/pipeline.hpp"

namespace moodcam::cli {

inline constexpr const char* tool_name = "moodcam";
inline constexpr const char* tool_version = "1.0.0";
inline constexpr int report_schema_version = 1;

inline json tool_json() { return {{"name", tool_name}, {"version", tool_version}}; }

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json confusion_json(const learn::confusion& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

inline json cell_json(const learn::lopo_result& r) {
  std::size_t undefined = 0;
  for (const auto& f : r.folds)
    if (f.status == learn::fold_status::metrics_undefined) ++undefined;
  return {{"f1", opt(r.pooled_f1)},
          {"auc", opt(r.pooled_auc)},
          {"f1_low_positive", opt(r.pooled_f1_low)},
          {"f1_degenerate", r.pooled_f1_degenerate},
          {"mean_fold_f1", opt(r.mean_fold_f1)},
          {"mean_fold_auc", opt(r.mean_fold_auc)},
          {"folds", r.folds.size()},
          {"folds_skipped", r.skipped_folds},
          {"folds_metrics_undefined", undefined},
          {"confusion", confusion_json(r.pooled_counts)}};
}

inline std::size_t count_participants(const sample_set& s) { return learn::participants_of(s).size(); }

/// Main table: one row per horizon set, a valence and an arousal cell each.
inline json main_report_json(const run_results& run) {
  json rows = json::array();
  for (const auto& set : run.sets) {
    json row{{"model", set.model_name},
             {"horizon", set.label},
             {"lag_days", set.samples.lag_days},
             {"n_rows", set.samples.rows.size()},
             {"n_participants", count_participants(set.samples)},
             {"n_features", set.samples.width()}};
    for (const auto& e : run.evaluations)
      if (e.label == set.label) row[std::string(to_string(e.tgt))] = cell_json(e.result);
    rows.push_back(std::move(row));
  }
  return {{"schema_version", report_schema_version},
          {"tool", tool_json()},
          {"table", "main"},
          {"positive_class", "high"},
          {"rows", std::move(rows)}};
}

inline json ablation_report_json(const std::vector<labeled_set>& sets, const std::vector<ablation::ablation_grid>& grids) {
  json horizons = json::array();
  for (const auto& s : sets) horizons.push_back({{"horizon", s.label}, {"model", s.ablation_name}});
  json modes = json::array();
  for (const auto& grid : grids) {
    json rows = json::array();
    for (feature_group g : all_feature_groups) {
      json cells = json::array();
      for (const auto& s : sets)
        for (target t : {target::valence, target::arousal}) {
          const auto* c = grid.find(g, s.label, t);
          if (!c) throw error(errc::data_error, "ablation cell missing");
          cells.push_back({{"horizon", s.label},
                           {"target", to_string(t)},
                           {"columns", c->columns},
                           {"f1", opt(c->f1)},
                           {"auc", opt(c->auc)},
                           {"error", c->error.empty() ? json(nullptr) : json(c->error)}});
        }
      rows.push_back({{"feature", display_name(g)}, {"group", to_string(g)}, {"cells", std::move(cells)}});
    }
    modes.push_back({{"mode", to_string(grid.kind)}, {"rows", std::move(rows)}});
  }
  return {{"schema_version", report_schema_version},
          {"tool", tool_json()},
          {"table", "ablation"},
          {"positive_class", "high"},
          {"horizons", std::move(horizons)},
          {"modes", std::move(modes)}};
}

// --- human-readable rendering -----------------------------------------------------------------

inline std::string fmt2(const json& v) {
  if (v.is_null()) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v.get<double>());
  return buf;
}

/// Renders rows of cells as a markdown table, or as whitespace-aligned text.
inline std::string render_table(const std::vector<std::vector<std::string>>& rows, bool markdown,
                                std::size_t header_rows = 1) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& r) {
    if (markdown) out << '|';
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < r.size() ? r[c] : "";
      if (markdown) out << ' ' << std::left << std::setw(static_cast<int>(width[c])) << cell << " |";
      else {
        if (c) out << "  ";
        if (c == 0) out << std::left;
        else out << std::right;
        out << std::setw(static_cast<int>(width[c])) << cell;
      }
    }
    out << '\n';
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    line(rows[i]);
    if (i + 1 == header_rows) {
      if (markdown) {
        out << '|';
        for (std::size_t c = 0; c < width.size(); ++c) out << std::string(width[c] + 2, '-') << '|';
      } else {
        std::size_t total = 0;
        for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
        out << std::string(total, '-');
      }
      out << '\n';
    }
  }
  std::string s = out.str();
  if (!markdown) {
    // drop trailing spaces left by left-aligned padding
    std::string trimmed;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) {
      l.erase(l.find_last_not_of(' ') + 1);
      trimmed += l + '\n';
    }
    s = trimmed;
  }
  return s;
}

inline std::string render_main(const json& report, bool markdown) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Mood Model", "Valence F1", "Valence AUC", "Arousal F1", "Arousal AUC"});
  for (const auto& r : report.at("rows"))
    rows.push_back({r.at("model").get<std::string>(), fmt2(r.at("valence").at("f1")), fmt2(r.at("valence").at("auc")),
                    fmt2(r.at("arousal").at("f1")), fmt2(r.at("arousal").at("auc"))});
  return render_table(rows, markdown);
}

inline std::string render_ablation(const json& report, bool markdown) {
  std::ostringstream out;
  for (const auto& m : report.at("modes")) {
    const auto mode = m.at("mode").get<std::string>();
    out << (markdown ? "### " : "") << "Ablation (" << mode << ")\n\n";
    std::vector<std::string> top{"Feature"}, sub{""};
    for (const auto& h : report.at("horizons")) {
      for (const char* t : {"Valence", "Arousal"}) {
        top.push_back(h.at("model").get<std::string>());
        top.push_back("");
        sub.push_back(std::string(t) + " F1");
        sub.push_back(std::string(t) + " AUC");
      }
    }
    std::vector<std::vector<std::string>> rows{top, sub};
    for (const auto& r : m.at("rows")) {
      std::vector<std::string> row{r.at("feature").get<std::string>()};
      for (const auto& c : r.at("cells")) {
        row.push_back(fmt2(c.at("f1")));
        row.push_back(fmt2(c.at("auc")));
      }
      rows.push_back(std::move(row));
    }
    out << render_table(rows, markdown, 2) << '\n';
  }
  return out.str();
}

// --- manifest ---------------------------------------------------------------------------------

inline json attrition_json(const attrition& a) {
  return {{"unmatched_sessions", a.unmatched_sessions},
          {"label_less_days", a.label_less_days},
          {"survey_only_days", a.survey_only_days},
          {"incomplete_lag_rows", a.incomplete_lag_rows},
          {"masked_cells", a.masked_cells}};
}

/// Effective settings that influence results. Thread count and output location are left out,
/// so manifests of otherwise identical runs match byte for byte.
inline json config_snapshot(const run_config& cfg) {
  json j;
  j["features"] = {{"au_ids", cfg.au_ids},
                   {"pca_components", cfg.pca_components},
                   {"pca_scope", to_string(cfg.scope)},
                   {"pca_max_rows", cfg.pca_max_rows},
                   {"centroid", cfg.centroid},
                   {"include_acceleration", cfg.include_acceleration},
                   {"triangle_pairs", cfg.triangle_pairs_path ? json(cfg.triangle_pairs_path->filename().string())
                                                              : json(nullptr)}};
  j["windows"] = {{"window_minutes", cfg.window_minutes}, {"lags", cfg.lags}};
  j["model"] = {{"seed", cfg.seed},
                {"n_trees", cfg.n_trees},
                {"max_features", cfg.max_features},
                {"smote_k", cfg.smote_k},
                {"inner_folds", cfg.inner_folds},
                {"threshold", cfg.threshold},
                {"max_depth_grid", cfg.max_depth_grid},
                {"min_samples_leaf_grid", cfg.min_samples_leaf_grid}};
  j["ablation"] = {{"modes", cfg.ablation_modes}};
  return j;
}

inline json triangles_json(const features::triangle_spec& t) {
  json pairs = json::array();
  std::string text;
  for (const auto& [i, j] : t.pairs) {
    pairs.push_back({i, j});
    text += std::to_string(i) + "," + std::to_string(j) + "\n";
  }
  return {{"count", t.pairs.size()}, {"sha256", sha256_hex(text)}, {"centroid_indices", t.centroid_indices},
          {"pairs", std::move(pairs)}};
}

inline json input_json(const std::filesystem::path& p) {
  return {{"file", p.filename().string()}, {"sha256", file_sha256(p)}};
}

inline json fold_json(const learn::fold_result& f) {
  json j{{"held_out", f.held_out_participant},
         {"status", to_string(f.status)},
         {"fold_seed", f.fold_seed},
         {"n_train", f.n_train},
         {"n_synthetic", f.n_synthetic},
         {"n_test", f.n_test},
         {"f1", opt(f.f1)},
         {"auc", opt(f.auc)},
         {"selected_features", f.selected_feature_indices},
         {"max_depth", f.best_hyperparams.max_depth},
         {"min_samples_leaf", f.best_hyperparams.min_samples_leaf},
         {"tuning_row_level_fallback", f.tuning_fallback},
         {"smote_skipped", f.smote_skipped}};
  j["audit"] = {{"selection_rows", f.audit.selection_rows.size()},
                {"smote_rows", f.audit.smote_rows.size()},
                {"tuning_rows", f.audit.tuning_rows.size()},
                {"fit_rows", f.audit.fit_rows.size()},
                {"held_out_rows_in_training", f.audit.held_out_rows_in_training}};
  return j;
}

inline json features_json(const featurization& f, const run_config& cfg) {
  return {{"sessions_in", f.sessions_in},
          {"sessions_featurized", f.sessions.size()},
          {"sessions_without_usable_frames", f.sessions_without_usable_frames},
          {"pca", {{"scope", to_string(cfg.scope)},
                   {"fit_rows", f.pca_fit_rows},
                   {"components", f.pca.components.rows()},
                   {"explained_variance", std::vector<double>(f.pca.explained_variance.data(),
                                                              f.pca.explained_variance.data() +
                                                                  f.pca.explained_variance.size())}}},
          {"triangles", triangles_json(f.config.triangles)}};
}

inline json sets_json(const std::vector<labeled_set>& sets) {
  json out = json::array();
  for (const auto& s : sets)
    out.push_back({{"horizon", s.label},
                   {"rows", s.samples.rows.size()},
                   {"participants", count_participants(s.samples)},
                   {"features", s.samples.width()},
                   {"dropped", attrition_json(s.samples.dropped)}});
  return out;
}

inline json run_manifest(const std::string& command, const run_config& cfg, const run_results& run) {
  json evals = json::array();
  for (const auto& e : run.evaluations) {
    json folds = json::array();
    for (const auto& f : e.result.folds) folds.push_back(fold_json(f));
    evals.push_back({{"horizon", e.label}, {"target", to_string(e.tgt)}, {"folds", std::move(folds)}});
  }
  return {{"tool", tool_json()},
          {"command", command},
          {"config", config_snapshot(cfg)},
          {"seeds", {{"run", cfg.seed}, {"fold_seed_rule", "derive_seed(run, participant_id)"}}},
          {"inputs", {{"sessions", input_json(cfg.sessions_path)}, {"surveys", input_json(cfg.surveys_path)}}},
          {"featurization", features_json(run.features, cfg)},
          {"sample_sets", sets_json(run.sets)},
          {"evaluations", std::move(evals)}};
}

}  // namespace moodcam::cli
