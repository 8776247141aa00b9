#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/parallel.hpp"
#include "moodcam/core/seed.hpp"
#include "moodcam/core/types.hpp"
#include "moodcam/learn/forest.hpp"
#include "moodcam/learn/metrics.hpp"
#include "moodcam/learn/smote.hpp"
#include "moodcam/learn/tree.hpp"
#include "moodcam/learn/tuning.hpp"

namespace moodcam::learn {

struct lopo_config {
  std::vector<tree_params> grid = default_grid();
  int n_trees = 100;
  std::size_t max_features = 0;  // 0 = ceil(sqrt(d))
  int smote_k = 5;
  int inner_folds = 3;
  double threshold = 0.5;  // predict high when p >= threshold
  std::uint64_t seed = 42;
  unsigned threads = 1;
  bool keep_audit_ids = true;
};

/// Row ids that reached each training stage of one fold.
struct fold_audit {
  std::vector<std::string> selection_rows;
  std::vector<std::string> smote_rows;
  std::vector<std::string> tuning_rows;
  std::vector<std::string> fit_rows;
  std::size_t held_out_rows_in_training = 0;
};

enum class fold_status { ok, metrics_undefined, skipped_single_class_training };

constexpr std::string_view to_string(fold_status s) {
  switch (s) {
    case fold_status::ok: return "ok";
    case fold_status::metrics_undefined: return "metrics_undefined";
    case fold_status::skipped_single_class_training: return "skipped_single_class_training";
  }
  return "unknown";
}

struct fold_result {
  std::string held_out_participant;
  fold_status status = fold_status::ok;
  std::optional<double> f1;
  std::optional<double> auc;
  std::size_t n_test = 0;
  confusion counts;
  std::vector<std::size_t> selected_feature_indices;
  tree_params best_hyperparams;
  bool tuning_fallback = false;
  bool smote_skipped = false;
  std::size_t n_train = 0;
  std::size_t n_synthetic = 0;
  std::uint64_t fold_seed = 0;
  std::vector<std::string> test_row_ids;
  std::vector<double> test_scores;
  std::vector<int> test_labels;
  fold_audit audit;
};

struct lopo_result {
  std::vector<fold_result> folds;
  std::optional<double> pooled_f1;
  std::optional<double> pooled_auc;
  bool pooled_f1_degenerate = false;
  std::optional<double> pooled_f1_low;  // F1 with low as the positive class
  confusion pooled_counts;
  std::optional<double> mean_fold_f1;
  std::optional<double> mean_fold_auc;
  std::size_t skipped_folds = 0;
};

inline std::vector<std::string> participants_of(const sample_set& samples) {
  std::set<std::string> ids;
  for (const auto& r : samples.rows) ids.insert(r.participant_id);
  return {ids.begin(), ids.end()};
}

namespace detail {

inline matrix gather(const sample_set& samples, std::span<const std::size_t> rows) {
  matrix X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(samples.width()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& v = samples.rows[rows[i]].values;
    for (std::size_t c = 0; c < v.size(); ++c) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v[c];
  }
  return X;
}

/// Replaces NaN cells in both matrices with the training rows' column medians (0 if none).
inline void impute_with_training_medians(matrix& train, matrix& test) {
  std::vector<double> col;
  for (Eigen::Index c = 0; c < train.cols(); ++c) {
    col.clear();
    for (Eigen::Index r = 0; r < train.rows(); ++r)
      if (!std::isnan(train(r, c))) col.push_back(train(r, c));
    double fill = 0.0;
    if (!col.empty()) {
      std::sort(col.begin(), col.end());
      std::size_t m = col.size();
      fill = m % 2 ? col[m / 2] : 0.5 * (col[m / 2 - 1] + col[m / 2]);
    }
    for (Eigen::Index r = 0; r < train.rows(); ++r)
      if (std::isnan(train(r, c))) train(r, c) = fill;
    for (Eigen::Index r = 0; r < test.rows(); ++r)
      if (std::isnan(test(r, c))) test(r, c) = fill;
  }
}

}  // namespace detail

/// Trains on every participant except `held_out` and scores that participant's rows:
/// feature selection -> SMOTE -> tuning -> final fit, all on training rows only.
inline fold_result evaluate_fold(const sample_set& samples, target tgt, const std::string& held_out,
                                 const lopo_config& cfg) {
  fold_result out;
  out.held_out_participant = held_out;
  out.fold_seed = derive_seed(cfg.seed, held_out);

  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t i = 0; i < samples.rows.size(); ++i)
    (samples.rows[i].participant_id == held_out ? test_idx : train_idx).push_back(i);
  out.n_test = test_idx.size();
  out.n_train = train_idx.size();
  for (std::size_t i : test_idx) {
    out.test_row_ids.push_back(samples.rows[i].row_id);
    out.test_labels.push_back(samples.rows[i].label(tgt));
  }

  std::vector<int> y_train;
  for (std::size_t i : train_idx) y_train.push_back(samples.rows[i].label(tgt));
  const auto positives = std::count(y_train.begin(), y_train.end(), 1);
  if (train_idx.size() < 2 || positives == 0 || positives == static_cast<long>(y_train.size())) {
    out.status = fold_status::skipped_single_class_training;
    return out;
  }

  matrix X_train = detail::gather(samples, train_idx);
  matrix X_test = detail::gather(samples, test_idx);
  detail::impute_with_training_medians(X_train, X_test);

  std::vector<std::string> train_ids;
  if (cfg.keep_audit_ids)
    for (std::size_t i : train_idx) train_ids.push_back(samples.rows[i].row_id);

  // feature selection
  forest_params fp{cfg.n_trees, cfg.max_features, derive_seed(out.fold_seed, "forest")};
  auto importance = rf_gini_importance(X_train, y_train, fp);
  out.selected_feature_indices = select_features(importance);
  std::vector<Eigen::Index> cols(out.selected_feature_indices.begin(), out.selected_feature_indices.end());
  matrix Xs_train = X_train(Eigen::all, cols);
  matrix Xs_test = X_test(Eigen::all, cols);
  out.audit.selection_rows = train_ids;

  // rebalancing
  std::map<std::string, std::size_t> group_of;
  std::vector<std::size_t> groups;
  for (std::size_t i : train_idx)
    groups.push_back(group_of.try_emplace(samples.rows[i].participant_id, group_of.size()).first->second);
  smote_result balanced;
  try {
    balanced = smote(Xs_train, y_train, cfg.smote_k, derive_seed(out.fold_seed, "smote"));
  } catch (const error& e) {
    if (e.code() != errc::too_few_minority) throw;
    out.smote_skipped = true;
    balanced.X = Xs_train;
    balanced.y = y_train;
    balanced.original_rows = y_train.size();
  }
  out.audit.smote_rows = train_ids;
  out.n_synthetic = balanced.parents.size();
  // rows reaching tuning and the final fit: the real training rows plus both parents of every
  // synthetic row, traced back through the SMOTE output
  std::vector<std::string> balanced_ids;
  if (cfg.keep_audit_ids) {
    balanced_ids.assign(train_ids.begin(), train_ids.begin() + static_cast<std::ptrdiff_t>(balanced.original_rows));
    for (const auto& [base, nn] : balanced.parents) {
      balanced_ids.push_back(train_ids[base]);
      balanced_ids.push_back(train_ids[nn]);
    }
  }
  std::vector<std::uint8_t> scored(balanced.y.size(), 0);
  std::fill_n(scored.begin(), balanced.original_rows, std::uint8_t{1});
  for (const auto& [base, nn] : balanced.parents) groups.push_back(groups[base]);

  // tuning
  auto tuned = tune_hyperparams(balanced.X, balanced.y, groups, cfg.grid,
                                derive_seed(out.fold_seed, "tune"), scored, cfg.inner_folds);
  out.best_hyperparams = tuned.best;
  out.tuning_fallback = tuned.row_level_fallback;
  out.audit.tuning_rows = balanced_ids;

  // final model
  auto tree = train_decision_tree(balanced.X, balanced.y, tuned.best);
  out.audit.fit_rows = std::move(balanced_ids);
  out.test_scores = tree.predict_proba_all(Xs_test);

  std::set<std::string> test_ids(out.test_row_ids.begin(), out.test_row_ids.end());
  for (const auto* stage : {&out.audit.selection_rows, &out.audit.smote_rows, &out.audit.tuning_rows,
                            &out.audit.fit_rows})
    for (const auto& id : *stage) out.audit.held_out_rows_in_training += test_ids.count(id);

  std::vector<int> pred;
  for (double s : out.test_scores) pred.push_back(s >= cfg.threshold ? 1 : 0);
  out.counts = confusion_matrix(pred, out.test_labels);
  const auto test_pos = std::count(out.test_labels.begin(), out.test_labels.end(), 1);
  if (test_pos == 0 || test_pos == static_cast<long>(out.test_labels.size())) {
    out.status = fold_status::metrics_undefined;
  } else {
    out.f1 = f1_from(out.counts).value;
    out.auc = auc(out.test_scores, out.test_labels);
  }
  return out;
}

/// Pools held-out predictions (in fold order) into headline metrics.
inline lopo_result pool_folds(std::vector<fold_result> folds, double threshold = 0.5) {
  lopo_result out;
  out.folds = std::move(folds);
  std::vector<double> scores;
  std::vector<int> labels;
  double f1_sum = 0.0, auc_sum = 0.0;
  int defined = 0;
  for (const auto& f : out.folds) {
    if (f.status == fold_status::skipped_single_class_training) {
      ++out.skipped_folds;
      continue;
    }
    scores.insert(scores.end(), f.test_scores.begin(), f.test_scores.end());
    labels.insert(labels.end(), f.test_labels.begin(), f.test_labels.end());
    if (f.status == fold_status::ok) {
      f1_sum += *f.f1;
      auc_sum += *f.auc;
      ++defined;
    }
  }
  if (defined > 0) {
    out.mean_fold_f1 = f1_sum / defined;
    out.mean_fold_auc = auc_sum / defined;
  }
  if (labels.empty()) return out;
  std::vector<int> pred;
  for (double s : scores) pred.push_back(s >= threshold ? 1 : 0);
  out.pooled_counts = confusion_matrix(pred, labels);
  auto f = f1_from(out.pooled_counts);
  out.pooled_f1 = f.value;
  out.pooled_f1_degenerate = f.degenerate;
  out.pooled_f1_low = f1(pred, labels, 0).value;
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos > 0 && pos < static_cast<long>(labels.size())) out.pooled_auc = auc(scores, labels);
  return out;
}

/// Leave-one-participant-out evaluation; folds run in parallel with participant-derived seeds.
inline lopo_result lopo_evaluate(const sample_set& samples, target tgt, const lopo_config& cfg) {
  auto participants = participants_of(samples);
  if (participants.size() < 2)
    throw error(errc::too_few_participants, "LOPO needs at least 2 participants");
  std::vector<fold_result> folds(participants.size());
  parallel_for(participants.size(), cfg.threads,
               [&](std::size_t i) { folds[i] = evaluate_fold(samples, tgt, participants[i], cfg); });
  return pool_folds(std::move(folds), cfg.threshold);
}

}  // namespace moodcam::learn
