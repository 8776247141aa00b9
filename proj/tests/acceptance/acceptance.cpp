// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "moodcam/cli/commands.hpp"
#include "moodcam/dataset/epoch_stats.hpp"
#include "moodcam/features/geometry.hpp"
#include "moodcam/features/pca.hpp"
#include "moodcam/learn/lopo.hpp"
#include "moodcam/learn/metrics.hpp"
#include "moodcam/learn/smote.hpp"
#include "moodcam/synth/cohort.hpp"

using namespace moodcam;
namespace fs = std::filesystem;

namespace {

struct outcome {
  bool pass = true;
  std::string detail;
};

/// Collects failed checks; the first few are reported.
struct checker {
  int failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  outcome done(const std::string& summary) const {
    if (failures == 0) return {true, summary};
    return {false, std::to_string(failures) + " failed check(s): " + first};
  }
};

std::string fmt(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

oracle::pt op(point2 p) { return {p.x, p.y}; }

point2 transform(point2 p, double scale, double rad, point2 shift) {
  return {scale * (std::cos(rad) * p.x - std::sin(rad) * p.y) + shift.x,
          scale * (std::sin(rad) * p.x + std::cos(rad) * p.y) + shift.y};
}

cli::run_config default_config() {
  std::stringstream empty;
  return cli::parse_config(empty, fs::temp_directory_path());
}

// --- 1 ----------------------------------------------------------------------------------------

outcome geometry_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  checker c;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::uniform_real_distribution<double> scale(0.1, 20.0);
  std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
  double worst_oracle = 0.0, worst_invariance = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    point2 p[6];
    for (auto& q : p) q = {u(rng), u(rng)};
    double ear = features::eye_aspect_ratio(p[0], p[1], p[2], p[3], p[4], p[5]);
    double ref = oracle::ear(op(p[0]), op(p[1]), op(p[2]), op(p[3]), op(p[4]), op(p[5]));
    worst_oracle = std::max(worst_oracle, std::abs(ear - ref));

    point2 ctr{u(rng), u(rng)}, a{u(rng), u(rng)}, b{u(rng), u(rng)};
    double iva = features::inter_vector_angle(ctr, a, b);
    worst_oracle = std::max(worst_oracle, std::abs(iva - oracle::iva(op(ctr), op(a), op(b))));

    const double s = scale(rng);
    const point2 shift{u(rng), u(rng)};
    point2 q[6];
    for (int i = 0; i < 6; ++i) q[i] = transform(p[i], s, 0.0, shift);
    worst_invariance =
        std::max(worst_invariance, std::abs(features::eye_aspect_ratio(q[0], q[1], q[2], q[3], q[4], q[5]) - ear));

    const double rad = angle(rng);
    double moved = features::inter_vector_angle(transform(ctr, s, rad, shift), transform(a, s, rad, shift),
                                                transform(b, s, rad, shift));
    worst_invariance = std::max(worst_invariance, std::abs(moved - iva));
  }
  c.expect(worst_oracle <= 1e-12, "oracle mismatch " + std::to_string(worst_oracle));
  c.expect(worst_invariance <= 1e-9, "invariance residual " + std::to_string(worst_invariance));
  const double secs = seconds_since(t0);
  c.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "1000 configurations, oracle residual %.1e, invariance residual %.1e, %.2f s",
                worst_oracle, worst_invariance, secs);
  return c.done(buf);
}

// --- 2 ----------------------------------------------------------------------------------------

outcome pca_properties() {
  checker c;
  std::mt19937_64 rng(202);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd mix(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) mix(i, j) = n(rng);
  Eigen::MatrixXd rows(300, 8);
  for (int i = 0; i < 300; ++i)
    for (int j = 0; j < 8; ++j) rows(i, j) = n(rng);
  rows = rows * mix;
  auto model = features::fit_pca(rows, 6);
  double ortho = (model.components * model.components.transpose() - Eigen::MatrixXd::Identity(6, 6))
                     .cwiseAbs()
                     .maxCoeff();
  c.expect(ortho < 1e-9, "orthonormality residual " + std::to_string(ortho));
  for (int k = 1; k < 6; ++k)
    c.expect(model.explained_variance(k) <= model.explained_variance(k - 1), "variance increases at " + std::to_string(k));
  double mean_proj = features::project(model, model.mean).cwiseAbs().maxCoeff();
  c.expect(mean_proj == 0.0, "mean projects to " + std::to_string(mean_proj));

  Eigen::VectorXd dir(5);
  dir << 1, -2, 0.5, 3, 1;
  Eigen::MatrixXd rank1(50, 5);
  for (int i = 0; i < 50; ++i) rank1.row(i) = (n(rng) * dir).transpose();
  auto r1 = features::fit_pca(rank1, 3);
  c.expect(r1.explained_variance(0) > 0.0, "rank-1 leading variance is zero");
  c.expect(r1.explained_variance(1) <= 1e-12 * r1.explained_variance(0) &&
               r1.explained_variance(2) <= 1e-12 * r1.explained_variance(0),
           "rank-1 data has a second nonzero variance");
  return c.done("orthonormality residual " + fmt(ortho * 1e15, 1) + "e-15, variances non-increasing, rank-1 and mean checks hold");
}

// --- 3 ----------------------------------------------------------------------------------------

outcome auc_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  checker c;
  std::mt19937_64 rng(303);
  int compared = 0;
  while (compared < 500) {
    std::size_t n = 2 + rng() % 11;
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 6) / 5.0;
      labels[i] = static_cast<int>(rng() % 2);
    }
    auto pos = std::count(labels.begin(), labels.end(), 1);
    if (pos == 0 || pos == static_cast<long>(n)) continue;
    double lib = learn::auc(scores, labels);
    double ref = oracle::auc(scores, labels);
    c.expect(lib == ref, "set " + std::to_string(compared) + ": " + std::to_string(lib) + " vs " + std::to_string(ref));
    ++compared;
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
  return c.done("500 sets of size <= 12 match exhaustive pair counting exactly, " + fmt(secs, 3) + " s");
}

// --- 4 ----------------------------------------------------------------------------------------

outcome smote_properties() {
  checker c;
  std::mt19937_64 rng(404);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 30 + trial, cols = 4;
    learn::matrix X(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) X(i, j) = n(rng);
    std::vector<int> y(rows, 0);
    for (int i = 0; i < 5 + trial % 7; ++i) y[(i * 7) % rows] = 1;
    auto r = learn::smote(X, y, 5, static_cast<std::uint64_t>(trial));
    auto pos = std::count(r.y.begin(), r.y.end(), 1);
    c.expect(2 * pos == static_cast<long>(r.y.size()), "classes unbalanced in trial " + std::to_string(trial));
    std::vector<Eigen::Index> minority;
    for (int i = 0; i < rows; ++i)
      if (y[i] == 1) minority.push_back(i);
    // membership: the closest segment between any two real minority points
    for (Eigen::Index s = rows; s < r.X.rows(); ++s) {
      Eigen::RowVectorXd p = r.X.row(s);
      double best = std::numeric_limits<double>::infinity();
      for (auto a : minority)
        for (auto b : minority) {
          if (a == b) continue;
          Eigen::RowVectorXd d = X.row(b) - X.row(a);
          double t = std::clamp((p - X.row(a)).dot(d) / d.squaredNorm(), 0.0, 1.0);
          best = std::min(best, (p - X.row(a) - t * d).norm());
        }
      worst = std::max(worst, best);
    }
    auto again = learn::smote(X, y, 5, static_cast<std::uint64_t>(trial));
    c.expect(again.X == r.X && again.y == r.y, "not deterministic in trial " + std::to_string(trial));
  }
  c.expect(worst < 1e-9, "membership residual " + std::to_string(worst));
  char buf[128];
  std::snprintf(buf, sizeof buf, "20 imbalanced sets balanced exactly, membership residual %.1e, deterministic", worst);
  return c.done(buf);
}

// --- 5 ----------------------------------------------------------------------------------------

outcome leakage_audit() {
  checker c;
  auto cfg = default_config();
  cfg.cohort.n_participants = 5;
  cfg.cohort.n_days = 7;
  cfg.n_trees = 30;
  auto cohort = synth::generate_cohort(cfg.cohort);
  auto feats = cli::featurize(cohort.sessions, cfg);
  auto sets = cli::build_sample_sets(feats.sessions, cohort.surveys, cfg);
  auto lopo = cfg.lopo();
  std::size_t folds_checked = 0;
  for (const auto& set : sets) {
    if (set.label != "at_moment" && set.label != "daily") continue;
    auto participants = learn::participants_of(set.samples);
    c.expect(participants.size() == 5, set.label + " has " + std::to_string(participants.size()) + " participants");
    for (target t : {target::valence, target::arousal}) {
      auto r = learn::lopo_evaluate(set.samples, t, lopo);
      c.expect(r.folds.size() == participants.size(), set.label + ": K participants did not give K folds");
      for (const auto& f : r.folds) {
        if (f.status == learn::fold_status::skipped_single_class_training) continue;
        std::set<std::string> held(f.test_row_ids.begin(), f.test_row_ids.end());
        std::set<std::string> expected_held;
        for (const auto& row : set.samples.rows)
          if (row.participant_id == f.held_out_participant) expected_held.insert(row.row_id);
        c.expect(held == expected_held, "test rows are not exactly the held-out participant's rows");
        const std::pair<const char*, const std::vector<std::string>*> stages[] = {
            {"selection", &f.audit.selection_rows},
            {"smote", &f.audit.smote_rows},
            {"tuning", &f.audit.tuning_rows},
            {"fit", &f.audit.fit_rows}};
        for (const auto& [name, ids] : stages) {
          c.expect(!ids->empty(), std::string(name) + " audit is empty");
          for (const auto& id : *ids)
            c.expect(!held.count(id), set.label + " fold " + f.held_out_participant + ": " + id + " reached " + name);
        }
        c.expect(f.audit.held_out_rows_in_training == 0, "audit counter is nonzero");
        ++folds_checked;
      }
    }
  }
  // black-box check: scrambling the held-out participant's labels changes nothing the fold learned
  const auto& at_moment = sets.front().samples;
  const std::string held_out = learn::participants_of(at_moment)[2];
  auto base = learn::evaluate_fold(at_moment, target::valence, held_out, lopo);
  auto scrambled = at_moment;
  std::mt19937_64 rng(505);
  for (auto& row : scrambled.rows)
    if (row.participant_id == held_out) row.valence_label = static_cast<int>(rng() % 2);
  auto other = learn::evaluate_fold(scrambled, target::valence, held_out, lopo);
  c.expect(base.test_scores == other.test_scores, "held-out labels changed the test scores");
  c.expect(base.selected_feature_indices == other.selected_feature_indices, "held-out labels changed feature selection");
  c.expect(base.best_hyperparams.max_depth == other.best_hyperparams.max_depth &&
               base.best_hyperparams.min_samples_leaf == other.best_hyperparams.min_samples_leaf,
           "held-out labels changed tuning");
  return c.done(std::to_string(folds_checked) + " folds over at-moment and daily sets: no held-out row in selection, "
                "SMOTE, tuning or fit; 5 participants -> 5 folds; label scramble leaves the fold unchanged");
}

// --- 6 ----------------------------------------------------------------------------------------

outcome planted_signal() {
  const auto t0 = std::chrono::steady_clock::now();
  checker c;
  auto cfg = default_config();
  auto cohort = synth::generate_cohort(cfg.cohort);
  auto feats = cli::featurize(cohort.sessions, cfg);
  auto samples = dataset::at_moment_samples(feats.sessions, cohort.surveys, cfg.window_minutes);
  auto lopo = cfg.lopo();
  lopo.keep_audit_ids = false;
  auto r = learn::lopo_evaluate(samples, target::valence, lopo);
  double auc = r.pooled_auc.value_or(0.0);
  c.expect(auc >= 0.85, "valence AUC " + fmt(auc) + " < 0.85");

  auto shuffled = samples;
  std::vector<int> labels;
  for (const auto& row : shuffled.rows) labels.push_back(row.valence_label);
  std::mt19937_64 rng(606);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t i = 0; i < labels.size(); ++i) shuffled.rows[i].valence_label = labels[i];
  auto null = learn::lopo_evaluate(shuffled, target::valence, lopo);
  double null_auc = null.pooled_auc.value_or(0.0);
  c.expect(null_auc >= 0.45 && null_auc <= 0.55, "shuffled AUC " + fmt(null_auc) + " outside [0.45, 0.55]");
  const double secs = seconds_since(t0);
  c.expect(secs < 600.0, "runtime " + fmt(secs, 0) + " s");
  return c.done(std::to_string(cfg.cohort.n_participants) + " x " + std::to_string(cfg.cohort.n_days) + " cohort, " +
                std::to_string(samples.rows.size()) + " at-moment rows: valence AUC " + fmt(auc) +
                ", shuffled-label AUC " + fmt(null_auc) + ", " + fmt(secs, 1) + " s");
}

// --- 7 ----------------------------------------------------------------------------------------

outcome ablation_sensitivity() {
  checker c;
  const feature_group planted = feature_group::smiling;
  const feature_group noise = feature_group::head_euler;
  double drop_sum = 0.0, noise_sum = 0.0;
  const int seeds = 5;
  std::string per_seed;
  for (int s = 0; s < seeds; ++s) {
    auto cfg = default_config();
    cfg.seed = 1000 + static_cast<std::uint64_t>(s);
    cfg.cohort.seed = cfg.seed;
    cfg.cohort.n_participants = 12;
    cfg.cohort.n_days = 14;
    cfg.cohort.signal = {{planted, 2.0}};
    auto cohort = synth::generate_cohort(cfg.cohort);
    auto feats = cli::featurize(cohort.sessions, cfg);
    auto samples = dataset::at_moment_samples(feats.sessions, cohort.surveys, cfg.window_minutes);
    auto lopo = cfg.lopo();
    lopo.keep_audit_ids = false;
    auto score = [&](const sample_set& set) {
      return learn::lopo_evaluate(set, target::valence, lopo).pooled_auc.value_or(0.5);
    };
    double full = score(samples);
    double without_planted = score(ablation::ablate(samples, planted, ablation::mode::remove_group));
    double without_noise = score(ablation::ablate(samples, noise, ablation::mode::remove_group));
    drop_sum += full - without_planted;
    noise_sum += full - without_noise;
    per_seed += (s ? ", " : "") + fmt(full, 2) + "/" + fmt(without_planted, 2) + "/" + fmt(without_noise, 2);
  }
  const double drop = drop_sum / seeds;
  const double noise_change = noise_sum / seeds;
  c.expect(drop >= 0.15, "mean drop " + fmt(drop) + " < 0.15");
  c.expect(std::abs(noise_change) <= 0.05, "mean noise-group change " + fmt(noise_change) + " exceeds 0.05");
  return c.done("removing smiling drops at-moment valence AUC by " + fmt(drop) + ", removing head_euler changes it by " +
                fmt(noise_change) + " (mean of 5 seeds; full/without planted/without noise: " + per_seed + ")");
}

// --- 8 ----------------------------------------------------------------------------------------

cli::run_config small_run_config(const fs::path& dir) {
  std::stringstream ini(
      "[synth]\nn_participants = 6\nn_days = 10\n"
      "[model]\nn_trees = 20\n");
  return cli::parse_config(ini, dir);
}

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("moodcam_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

outcome report_shape() {
  checker c;
  auto dir = fresh_dir("shape");
  auto cfg = small_run_config(dir);
  cli::cmd_synth(cfg, dir);
  cli::cmd_run(cfg, dir / "run");
  cli::cmd_ablate(cfg, dir / "ablate");
  auto main = cli::json::parse(cli::read_file(dir / "run" / "report.json"));
  const std::vector<std::string> models{"At moment", "Daily Average", "Next Day Average (1 Day Lag)",
                                        "Next Day Average (2 Day Lag)"};
  c.expect(main.at("rows").size() == models.size(), "main table has " + std::to_string(main.at("rows").size()) + " rows");
  for (std::size_t i = 0; i < std::min(models.size(), main.at("rows").size()); ++i) {
    const auto& row = main["rows"][i];
    c.expect(row.at("model") == models[i], "row " + std::to_string(i) + " is " + row.at("model").dump());
    for (const char* t : {"valence", "arousal"})
      for (const char* m : {"f1", "auc"}) c.expect(row.at(t).at(m).is_number(), models[i] + " " + t + " " + m + " missing");
  }
  auto md = cli::read_file(dir / "run" / "report.md");
  std::vector<std::string> header;
  {
    std::stringstream line(md.substr(0, md.find('\n')));
    std::string cell;
    while (std::getline(line, cell, '|')) {
      auto b = cell.find_first_not_of(' ');
      if (b != std::string::npos) header.push_back(cell.substr(b, cell.find_last_not_of(' ') - b + 1));
    }
  }
  c.expect(header == std::vector<std::string>{"Mood Model", "Valence F1", "Valence AUC", "Arousal F1", "Arousal AUC"},
           "main markdown header differs");

  auto abl = cli::json::parse(cli::read_file(dir / "ablate" / "ablation.json"));
  const std::vector<std::string> features{"Eye Open", "Smiling", "Head Euler Angle", "Action Units",
                                          "Eye Aspect Ratios", "Inter-Vector Angles"};
  const std::vector<std::string> horizons{"At moment", "Daily", "Next Day (1 Day Lag)", "Next Day (2 Day Lag)"};
  std::vector<std::string> got_h;
  for (const auto& h : abl.at("horizons")) got_h.push_back(h.at("model"));
  c.expect(got_h == horizons, "ablation horizons differ");
  std::set<std::string> modes;
  std::size_t numeric = 0;
  for (const auto& m : abl.at("modes")) {
    modes.insert(m.at("mode"));
    c.expect(m.at("rows").size() == 6, "mode has " + std::to_string(m.at("rows").size()) + " rows");
    std::size_t cells = 0;
    for (std::size_t r = 0; r < m.at("rows").size(); ++r) {
      const auto& row = m["rows"][r];
      if (r < features.size()) c.expect(row.at("feature") == features[r], "ablation row " + std::to_string(r) + " out of order");
      c.expect(row.at("cells").size() == 8, "row has " + std::to_string(row.at("cells").size()) + " cells");
      for (std::size_t k = 0; k < row.at("cells").size(); ++k) {
        const auto& cell = row["cells"][k];
        c.expect(cell.at("target") == (k % 2 ? "arousal" : "valence"), "cell target order");
        bool ok = cell.at("f1").is_number() && cell.at("auc").is_number();
        c.expect(ok, row.at("feature").get<std::string>() + " / " + cell.at("horizon").get<std::string>() +
                         " missing: " + cell.at("error").dump());
        numeric += ok;
        ++cells;
      }
    }
    c.expect(cells == 48, "mode has " + std::to_string(cells) + " cells");
  }
  c.expect(modes == std::set<std::string>{"remove_group", "only_group"}, "ablation modes differ");
  fs::remove_all(dir);
  return c.done("main table 4 models x 2 targets x {F1, AUC}; ablation 6 x 16 in table order for both modes, " +
                std::to_string(numeric) + "/96 cells filled");
}

// --- 9 ----------------------------------------------------------------------------------------

outcome builder_arithmetic() {
  checker c;
  std::vector<double> fixture{1, 2, 3, 4};
  auto s = dataset::summary_stats(fixture);
  const double expected[] = {1, 4, 2.5, 2.5, 10, 1.2909944, 1.75, 3.25};
  for (std::size_t k = 0; k < dataset::stat_count; ++k)
    c.expect(std::abs(s[k] - expected[k]) < 5e-8, std::string(dataset::stat_names[k]) + " = " + std::to_string(s[k]));

  auto cfg = default_config();
  cfg.cohort.n_participants = 3;
  cfg.cohort.n_days = 12;
  cfg.lags = {1, 2, 4, 8};
  auto cohort = synth::generate_cohort(cfg.cohort);
  auto feats = cli::featurize(cohort.sessions, cfg);
  auto sets = cli::build_sample_sets(feats.sessions, cohort.surveys, cfg);
  std::string widths;
  for (const auto& set : sets) {
    std::size_t expected_width = set.label == "at_moment" ? 40 : 1280 * static_cast<std::size_t>(std::max(1, set.samples.lag_days));
    c.expect(set.samples.width() == expected_width, set.label + " width " + std::to_string(set.samples.width()));
    c.expect(!set.samples.rows.empty(), set.label + " has no rows");
    for (const auto& row : set.samples.rows)
      if (row.values.size() != expected_width) {
        c.expect(false, set.label + " row " + row.row_id + " has the wrong width");
        break;
      }
    widths += (widths.empty() ? "" : ", ") + set.label + " " + std::to_string(set.samples.width());
  }
  return c.done("fixture statistics match; widths " + widths);
}

// --- 10 ---------------------------------------------------------------------------------------

outcome determinism() {
  checker c;
  std::vector<std::string> compared;
  auto run_once = [&](const std::string& name, unsigned threads, cli::pca_scope scope) {
    auto dir = fresh_dir(name);
    auto cfg = small_run_config(dir);
    cfg.threads = threads;
    cfg.scope = scope;
    cli::cmd_synth(cfg, dir);
    std::map<std::string, std::string> files;
    auto keep = [&](const cli::written_files& written) {
      for (const auto& f : written) files[fs::relative(f, dir).string()] = cli::read_file(f);
    };
    keep(cli::cmd_run(cfg, dir / "run"));
    if (scope == cli::pca_scope::global) keep(cli::cmd_ablate(cfg, dir / "ablate"));
    fs::remove_all(dir);
    return files;
  };
  for (auto scope : {cli::pca_scope::global, cli::pca_scope::per_fold}) {
    const std::string tag = scope == cli::pca_scope::global ? "global" : "per_fold";
    auto a = run_once("det_a", 1, scope);
    auto b = run_once("det_b", 1, scope);
    auto d = run_once("det_c", 4, scope);
    c.expect(!a.empty(), "no files written");
    for (const auto& [name, text] : a) {
      c.expect(b.count(name) && b[name] == text, tag + " " + name + " differs between identical runs");
      c.expect(d.count(name) && d[name] == text, tag + " " + name + " differs with 4 threads");
      compared.push_back(name);
    }
    c.expect(a.size() == b.size() && a.size() == d.size(), tag + ": runs wrote different file sets");
  }
  return c.done(std::to_string(compared.size()) + " report and manifest files byte-identical across repeat runs "
                "and 1 vs 4 threads (global and per-fold PCA)");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<outcome()>>> criteria = {
      {"geometry oracles and invariance", geometry_oracles},
      {"PCA properties", pca_properties},
      {"AUC matches exhaustive pair counting", auc_oracle},
      {"SMOTE balance, membership, determinism", smote_properties},
      {"LOPO leakage audit", leakage_audit},
      {"end-to-end planted signal", planted_signal},
      {"ablation sensitivity", ablation_sensitivity},
      {"report shape", report_shape},
      {"dataset builder arithmetic", builder_arithmetic},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << " - " << o.detail << " ["
              << fmt(seconds_since(t0), 1) << " s]" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
