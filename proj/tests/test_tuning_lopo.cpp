#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "moodcam/learn/lopo.hpp"
#include "moodcam/learn/tuning.hpp"

using namespace moodcam;
using namespace moodcam::learn;

namespace {

using label_rule = std::function<int(const std::vector<double>&, std::mt19937_64&)>;

/// `participants` x `rows` rows of uniform features in [0, 1); labels from `rule` for both targets.
sample_set make_set(int participants, int rows, int width, std::uint64_t seed, const label_rule& rule) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto schema = std::make_shared<feature_schema>();
  for (int j = 0; j < width; ++j) schema->push_back({"x" + std::to_string(j), feature_group::action_units});
  sample_set s;
  s.schema = schema;
  for (int p = 0; p < participants; ++p) {
    for (int r = 0; r < rows; ++r) {
      sample_row row;
      row.participant_id = "P" + std::to_string(p / 10) + std::to_string(p % 10);
      row.row_id = row.participant_id + "#" + std::to_string(r);
      row.reference_time_ms = r;
      for (int j = 0; j < width; ++j) row.values.push_back(u(rng));
      row.valence_label = rule(row.values, rng);
      row.arousal_label = rule(row.values, rng);
      s.rows.push_back(std::move(row));
    }
  }
  return s;
}

int first_feature(const std::vector<double>& v, std::mt19937_64&) { return v[0] > 0.5; }
int coin(const std::vector<double>&, std::mt19937_64& rng) { return static_cast<int>(rng() % 2); }

lopo_config fast_config() {
  lopo_config c;
  c.n_trees = 20;
  return c;
}

}  // namespace

TEST(Tuning, SingletonGridReturnsItsOnlyPoint) {
  matrix X(4, 1);
  X << 0, 1, 2, 3;
  std::vector<int> y{0, 0, 1, 1};
  std::vector<std::size_t> g{0, 0, 1, 1};
  auto r = tune_hyperparams(X, y, g, {{4, 2, 0.0}}, 1);
  EXPECT_EQ(r.best.max_depth, 4);
  EXPECT_EQ(r.best.min_samples_leaf, 2);
}

TEST(Tuning, EqualScoresPreferTheSimplerModel) {
  // perfectly separable by one split: every grid point scores AUC 1
  matrix X(40, 1);
  std::vector<int> y(40);
  std::vector<std::size_t> g(40);
  for (int i = 0; i < 40; ++i) {
    X(i, 0) = i % 2 ? 10.0 + i : -10.0 - i;
    y[i] = i % 2;
    g[i] = static_cast<std::size_t>(i % 5);
  }
  auto r = tune_hyperparams(X, y, g, default_grid(), 3);
  EXPECT_EQ(r.best.max_depth, 3);
  EXPECT_EQ(r.best.min_samples_leaf, 10);
  for (double v : r.mean_auc) EXPECT_EQ(v, 1.0);
}

TEST(Tuning, InteractionNeedsTheDeeperTree) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  matrix X(300, 2);
  std::vector<int> y(300);
  std::vector<std::size_t> g(300);
  for (int i = 0; i < 300; ++i) {
    X(i, 0) = u(rng);
    X(i, 1) = u(rng);
    y[i] = X(i, 0) > 0.5 && X(i, 1) > 0.5;
    g[i] = static_cast<std::size_t>(i % 6);
  }
  auto r = tune_hyperparams(X, y, g, {{1, 1, 0.0}, {2, 1, 0.0}}, 5);
  EXPECT_EQ(r.best.max_depth, 2);
  EXPECT_GT(r.mean_auc[1], r.mean_auc[0]);
  EXPECT_FALSE(r.row_level_fallback);
}

TEST(Tuning, InnerFoldsNeverSplitAGroup) {
  std::vector<int> y(60);
  std::vector<std::size_t> g(60);
  for (int i = 0; i < 60; ++i) {
    y[i] = i % 2;
    g[i] = static_cast<std::size_t>(i / 12);
  }
  bool fallback = true;
  int used = 0;
  auto fold = detail::inner_fold_assignment(y, g, 3, 9, fallback, used);
  EXPECT_FALSE(fallback);
  EXPECT_EQ(used, 3);
  for (int i = 0; i < 60; ++i) EXPECT_EQ(fold[i], fold[(i / 12) * 12]);
}

TEST(Tuning, OneGroupFallsBackToStratifiedRows) {
  matrix X(30, 1);
  std::vector<int> y(30);
  std::vector<std::size_t> g(30, 0);
  for (int i = 0; i < 30; ++i) {
    X(i, 0) = i;
    y[i] = i >= 15;
  }
  auto r = tune_hyperparams(X, y, g, {{1, 1, 0.0}, {2, 1, 0.0}}, 2);
  EXPECT_TRUE(r.row_level_fallback);
  EXPECT_EQ(r.inner_folds, 3);
}

TEST(Tuning, UnscoredRowsAreNeverValidated) {
  matrix X(40, 1);
  std::vector<int> y(40);
  std::vector<std::size_t> g(40);
  for (int i = 0; i < 40; ++i) {
    X(i, 0) = i;
    y[i] = i % 3 == 0;
    g[i] = static_cast<std::size_t>(i % 4);
  }
  std::vector<std::uint8_t> none(40, 0);
  auto r = tune_hyperparams(X, y, g, {{0, 1, 0.0}, {2, 5, 0.0}, {2, 10, 0.0}}, 1, none);
  for (double v : r.mean_auc) EXPECT_TRUE(std::isnan(v));
  EXPECT_EQ(r.best.max_depth, 2);
  EXPECT_EQ(r.best.min_samples_leaf, 10);

  std::vector<std::uint8_t> all(40, 1);
  auto scored = tune_hyperparams(X, y, g, {{0, 1, 0.0}, {2, 5, 0.0}, {2, 10, 0.0}}, 1, all);
  for (double v : scored.mean_auc) EXPECT_FALSE(std::isnan(v));
}

TEST(Tuning, Errors) {
  matrix X(2, 1);
  std::vector<int> y{0, 1};
  std::vector<std::size_t> g{0, 1};
  EXPECT_THROW(tune_hyperparams(X, y, g, {}, 1), error);
  std::vector<std::size_t> short_groups{0};
  EXPECT_THROW(tune_hyperparams(X, y, short_groups, default_grid(), 1), error);
}

TEST(Lopo, OneFoldPerParticipant) {
  auto s = make_set(3, 30, 4, 1, first_feature);
  auto r = lopo_evaluate(s, target::valence, fast_config());
  ASSERT_EQ(r.folds.size(), 3u);
  EXPECT_EQ(r.folds[0].held_out_participant, "P00");
  EXPECT_EQ(r.folds[2].held_out_participant, "P02");
  std::size_t tested = 0;
  for (const auto& f : r.folds) {
    EXPECT_EQ(f.n_test, 30u);
    EXPECT_EQ(f.n_train, 60u);
    EXPECT_EQ(f.fold_seed, derive_seed(42, f.held_out_participant));
    tested += f.test_scores.size();
  }
  EXPECT_EQ(tested, s.rows.size());
  ASSERT_TRUE(r.pooled_auc);
  EXPECT_GT(*r.pooled_auc, 0.9);
}

TEST(Lopo, HeldOutRowsNeverReachTraining) {
  auto s = make_set(5, 24, 6, 2, first_feature);
  auto r = lopo_evaluate(s, target::arousal, fast_config());
  for (const auto& f : r.folds) {
    EXPECT_EQ(f.audit.held_out_rows_in_training, 0u);
    EXPECT_EQ(f.audit.selection_rows.size(), f.n_train);
    EXPECT_EQ(f.audit.fit_rows.size(), f.n_train + 2 * f.n_synthetic);
    for (const auto* stage : {&f.audit.selection_rows, &f.audit.smote_rows, &f.audit.tuning_rows,
                              &f.audit.fit_rows})
      for (const auto& id : *stage) EXPECT_NE(id.substr(0, 3), f.held_out_participant);
  }
}

TEST(Lopo, HeldOutLabelsDoNotInfluenceTheFold) {
  auto s = make_set(4, 30, 5, 3, first_feature);
  auto base = evaluate_fold(s, target::valence, "P01", fast_config());
  std::mt19937_64 rng(77);
  auto scrambled = s;
  for (auto& row : scrambled.rows)
    if (row.participant_id == "P01") {
      row.valence_label = static_cast<int>(rng() % 2);
      for (auto& v : row.values) v = -v;
    }
  auto other = evaluate_fold(scrambled, target::valence, "P01", fast_config());
  EXPECT_EQ(base.selected_feature_indices, other.selected_feature_indices);
  EXPECT_EQ(base.best_hyperparams.max_depth, other.best_hyperparams.max_depth);
  EXPECT_EQ(base.best_hyperparams.min_samples_leaf, other.best_hyperparams.min_samples_leaf);
  EXPECT_EQ(base.n_synthetic, other.n_synthetic);
  // only the labels changed for these rows: scores on unchanged features would match
  auto relabeled = s;
  for (auto& row : relabeled.rows)
    if (row.participant_id == "P01") row.valence_label = 1 - row.valence_label;
  auto flipped = evaluate_fold(relabeled, target::valence, "P01", fast_config());
  EXPECT_EQ(base.test_scores, flipped.test_scores);
}

TEST(Lopo, ShuffledLabelsScoreAtChance) {
  auto s = make_set(20, 100, 6, 4, coin);
  auto r = lopo_evaluate(s, target::valence, fast_config());
  ASSERT_TRUE(r.pooled_auc);
  EXPECT_GE(*r.pooled_auc, 0.45);
  EXPECT_LE(*r.pooled_auc, 0.55);
}

TEST(Lopo, ThreadCountDoesNotChangeResults) {
  auto s = make_set(6, 20, 5, 5, first_feature);
  auto one = fast_config();
  auto many = fast_config();
  many.threads = 4;
  auto a = lopo_evaluate(s, target::valence, one);
  auto b = lopo_evaluate(s, target::valence, many);
  ASSERT_EQ(a.folds.size(), b.folds.size());
  for (std::size_t i = 0; i < a.folds.size(); ++i) {
    EXPECT_EQ(a.folds[i].test_scores, b.folds[i].test_scores);
    EXPECT_EQ(a.folds[i].selected_feature_indices, b.folds[i].selected_feature_indices);
  }
  EXPECT_EQ(a.pooled_auc, b.pooled_auc);
  EXPECT_EQ(a.pooled_f1, b.pooled_f1);
}

TEST(Lopo, SingleClassTrainingFoldIsSkipped) {
  // P00 is the only participant with high labels: its fold trains on all-low rows
  auto s = make_set(3, 10, 3, 6, [](const std::vector<double>&, std::mt19937_64&) { return 0; });
  for (auto& row : s.rows)
    if (row.participant_id == "P00") row.valence_label = 1;
  auto r = lopo_evaluate(s, target::valence, fast_config());
  EXPECT_EQ(r.folds[0].status, fold_status::skipped_single_class_training);
  EXPECT_EQ(r.skipped_folds, 1u);
  // the other two folds see a single class at test time
  EXPECT_EQ(r.folds[1].status, fold_status::metrics_undefined);
  EXPECT_EQ(r.folds[2].status, fold_status::metrics_undefined);
  EXPECT_FALSE(r.mean_fold_auc);
}

TEST(Lopo, MissingValuesAreImputedFromTrainingMedians) {
  auto s = make_set(3, 20, 3, 7, first_feature);
  for (auto& row : s.rows)
    if (row.participant_id == "P02") row.values[2] = std::numeric_limits<double>::quiet_NaN();
  auto r = lopo_evaluate(s, target::valence, fast_config());
  for (const auto& f : r.folds)
    for (double v : f.test_scores) EXPECT_FALSE(std::isnan(v));
}

TEST(Lopo, NeedsTwoParticipants) {
  auto s = make_set(1, 10, 2, 8, first_feature);
  try {
    lopo_evaluate(s, target::valence, fast_config());
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::too_few_participants);
  }
}
