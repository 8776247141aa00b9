#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "moodcam/ablation/harness.hpp"
#include "moodcam/cli/config.hpp"
#include "moodcam/cli/log.hpp"
#include "moodcam/core/parallel.hpp"
#include "moodcam/dataset/builder.hpp"
#include "moodcam/features/session_features.hpp"
#include "moodcam/learn/lopo.hpp"

namespace moodcam::cli {

using features::featurized_session;

/// A sample set plus the labels it carries in reports.
struct labeled_set {
  std::string label;          // at_moment, daily, next_day_lag1, ...
  std::string model_name;     // main-table row name
  std::string ablation_name;  // ablation-table column name
  sample_set samples;
};

struct featurization {
  features::featurizer_config config;
  features::pca_model pca;
  std::size_t pca_fit_rows = 0;
  std::vector<featurized_session> sessions;
  std::size_t sessions_in = 0;
  std::size_t sessions_without_usable_frames = 0;
};

inline features::pca_model fit_session_pca(const std::vector<session>& sessions,
                                           const features::featurizer_config& fcfg, int components,
                                           std::size_t max_rows, const std::string* exclude,
                                           std::size_t* rows_used = nullptr) {
  std::vector<const session*> use;
  for (const auto& s : sessions)
    if (!exclude || s.participant_id != *exclude) use.push_back(&s);
  auto rows = features::collect_iva_rows(use, fcfg, max_rows);
  if (rows_used) *rows_used = static_cast<std::size_t>(rows.rows());
  return features::fit_pca(rows, components);
}

inline featurization featurize(const std::vector<session>& sessions, const run_config& cfg,
                               const std::string* exclude_from_pca = nullptr, unsigned threads = 1) {
  featurization out;
  out.config = featurizer(cfg);
  out.sessions_in = sessions.size();
  out.pca = fit_session_pca(sessions, out.config, cfg.pca_components, cfg.pca_max_rows, exclude_from_pca,
                            &out.pca_fit_rows);
  auto schema = features::session_schema(out.config.au_ids, cfg.pca_components, out.config.include_acceleration);
  std::vector<std::optional<featurized_session>> slots(sessions.size());
  parallel_for(sessions.size(), threads, [&](std::size_t i) {
    const auto& s = sessions[i];
    try {
      featurized_session f;
      f.participant_id = s.participant_id;
      f.session_id = s.session_id;
      f.start_ms = s.start_ms();
      f.end_ms = s.end_ms();
      f.tz_offset_minutes = s.tz_offset_minutes;
      f.features = features::session_features(s, out.config, out.pca, schema);
      f.frames_used = s.frames.size();
      slots[i] = std::move(f);
    } catch (const error& e) {
      if (e.code() != errc::empty_session) throw;
    }
  });
  for (auto& slot : slots) {
    if (slot) out.sessions.push_back(std::move(*slot));
    else ++out.sessions_without_usable_frames;
  }
  return out;
}

inline std::vector<labeled_set> build_sample_sets(const std::vector<featurized_session>& sessions,
                                                  const std::vector<survey_response>& surveys,
                                                  const run_config& cfg) {
  std::vector<labeled_set> out;
  out.push_back({"at_moment", "At moment", "At moment",
                 dataset::at_moment_samples(sessions, surveys, cfg.window_minutes)});
  auto table = dataset::build_day_table(sessions, surveys);
  out.push_back({"daily", "Daily Average", "Daily", dataset::daily_samples(table)});
  std::vector<int> lags = cfg.lags;
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  for (int lag : lags) {
    std::string l = std::to_string(lag);
    out.push_back({"next_day_lag" + l, "Next Day Average (" + l + " Day Lag)", "Next Day (" + l + " Day Lag)",
                   dataset::next_day_samples(table, lag)});
  }
  return out;
}

struct evaluation {
  std::string label;
  target tgt;
  learn::lopo_result result;
};

struct run_results {
  featurization features;
  std::vector<labeled_set> sets;
  std::vector<evaluation> evaluations;  // set-major, valence then arousal
};

/// Featurizes, builds all horizon sets and runs LOPO for both targets on each.
inline run_results run_pipeline(const std::vector<session>& sessions, const std::vector<survey_response>& surveys,
                                const run_config& cfg) {
  run_results out;
  log(log_level::info, "featurizing " + std::to_string(sessions.size()) + " sessions");
  out.features = featurize(sessions, cfg, nullptr, cfg.threads);
  out.sets = build_sample_sets(out.features.sessions, surveys, cfg);
  auto lopo = cfg.lopo();

  if (cfg.scope == pca_scope::global) {
    for (const auto& set : out.sets) {
      for (target t : {target::valence, target::arousal}) {
        log(log_level::info, "evaluating " + set.label + " / " + std::string(to_string(t)));
        out.evaluations.push_back({set.label, t, learn::lopo_evaluate(set.samples, t, lopo)});
      }
    }
    return out;
  }

  // per-fold PCA: every fold refits PCA without its held-out participant and rebuilds the sets
  std::set<std::string> ids;
  for (const auto& s : sessions) ids.insert(s.participant_id);
  std::vector<std::string> participants(ids.begin(), ids.end());
  if (participants.size() < 2) throw error(errc::too_few_participants, "LOPO needs at least 2 participants");
  const std::size_t n_eval = out.sets.size() * 2;
  std::vector<std::vector<learn::fold_result>> folds(n_eval, std::vector<learn::fold_result>(participants.size()));
  std::vector<std::vector<bool>> present(n_eval, std::vector<bool>(participants.size(), false));
  auto inner = lopo;
  inner.threads = 1;
  parallel_for(participants.size(), cfg.threads, [&](std::size_t p) {
    const std::string& held_out = participants[p];
    auto feats = featurize(sessions, cfg, &held_out, 1);
    auto sets = build_sample_sets(feats.sessions, surveys, cfg);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      bool has_rows = std::any_of(sets[s].samples.rows.begin(), sets[s].samples.rows.end(),
                                  [&](const sample_row& r) { return r.participant_id == held_out; });
      if (!has_rows) continue;
      for (int t = 0; t < 2; ++t) {
        folds[s * 2 + t][p] = learn::evaluate_fold(sets[s].samples, t == 0 ? target::valence : target::arousal,
                                                   held_out, inner);
        present[s * 2 + t][p] = true;
      }
    }
  });
  for (std::size_t s = 0; s < out.sets.size(); ++s) {
    for (int t = 0; t < 2; ++t) {
      std::vector<learn::fold_result> kept;
      for (std::size_t p = 0; p < participants.size(); ++p)
        if (present[s * 2 + t][p]) kept.push_back(std::move(folds[s * 2 + t][p]));
      out.evaluations.push_back({out.sets[s].label, t == 0 ? target::valence : target::arousal,
                                 learn::pool_folds(std::move(kept), lopo.threshold)});
    }
  }
  return out;
}

/// The four ablation horizons: at moment, daily, next day with 1- and 2-day lags.
inline std::vector<labeled_set> ablation_sets(const std::vector<featurized_session>& sessions,
                                              const std::vector<survey_response>& surveys, run_config cfg) {
  cfg.lags = {1, 2};
  return build_sample_sets(sessions, surveys, cfg);
}

}  // namespace moodcam::cli
