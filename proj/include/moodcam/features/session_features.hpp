#pragma once

#include <Eigen/Dense>

#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "moodcam/core/error.hpp"
#include "moodcam/core/types.hpp"
#include "moodcam/features/geometry.hpp"
#include "moodcam/features/kinematics.hpp"
#include "moodcam/features/pca.hpp"

namespace moodcam::features {

struct featurizer_config {
  std::vector<int> au_ids = default_au_ids();
  landmark_layout layout = landmark_layout::make_default();
  triangle_spec triangles = default_triangle_spec(landmark_layout::make_default());
  double eye_epsilon = default_eye_epsilon;
  // Debug: append 10 mean IVA accelerations (not part of the default 40-feature schema).
  bool include_acceleration = false;
};

inline std::string numbered(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02d", prefix, i);
  return buf;
}

inline schema_ptr session_schema(const std::vector<int>& au_ids, int pca_dim = default_pca_components,
                                 bool include_acceleration = false) {
  if (au_ids.size() != au_count)
    throw error(errc::invalid_config, "au_ids must list exactly 12 ids");
  auto schema = std::make_shared<feature_schema>();
  for (int id : au_ids) schema->push_back({numbered("au", id), feature_group::action_units});
  schema->push_back({"smile_p", feature_group::smiling});
  schema->push_back({"left_eye_open_p", feature_group::eye_open});
  schema->push_back({"right_eye_open_p", feature_group::eye_open});
  schema->push_back({"head_yaw", feature_group::head_euler});
  schema->push_back({"head_pitch", feature_group::head_euler});
  schema->push_back({"head_roll", feature_group::head_euler});
  schema->push_back({"ear_left", feature_group::eye_aspect_ratio});
  schema->push_back({"ear_right", feature_group::eye_aspect_ratio});
  for (int i = 1; i <= pca_dim; ++i)
    schema->push_back({numbered("iva_pc", i), feature_group::inter_vector_angle});
  for (int i = 1; i <= pca_dim; ++i)
    schema->push_back({numbered("iva_vel", i), feature_group::inter_vector_angle});
  if (include_acceleration)
    for (int i = 1; i <= pca_dim; ++i)
      schema->push_back({numbered("iva_acc", i), feature_group::inter_vector_angle});
  return schema;
}

struct featurized_session {
  std::string participant_id;
  std::string session_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::int32_t tz_offset_minutes = 0;
  feature_vector features;
  std::size_t frames_used = 0;
};

/// Per-channel session means: 12 AU, smile, 2 eye-open, 3 head Euler, 2 EAR, PCA-projected IVA and
/// mean IVA velocity. Frames whose EAR or IVA is degenerate are skipped.
inline feature_vector session_features(const session& s, const featurizer_config& cfg,
                                       const pca_model& pca, schema_ptr schema = nullptr) {
  const int k = static_cast<int>(pca.output_dim());
  if (!schema) schema = session_schema(cfg.au_ids, k, cfg.include_acceleration);
  if (static_cast<std::size_t>(pca.input_dim()) != cfg.triangles.pairs.size())
    throw error(errc::dimension_mismatch, "PCA input dim does not match triangle pair count");

  const std::size_t base = au_count + 1 + 2 + 3 + 2;
  std::vector<double> sums(base, 0.0);
  std::vector<std::int64_t> times;
  std::vector<Eigen::VectorXd> projected;
  Eigen::VectorXd raw(cfg.triangles.pairs.size());

  for (const auto& f : s.frames) {
    double ear_l, ear_r;
    try {
      ear_l = eye_aspect_ratio(f.landmarks, cfg.layout.left_eye, cfg.eye_epsilon);
      ear_r = eye_aspect_ratio(f.landmarks, cfg.layout.right_eye, cfg.eye_epsilon);
      iva_raw_into(f.landmarks, cfg.triangles, std::span<double>(raw.data(), raw.size()));
    } catch (const error& e) {
      if (e.code() == errc::degenerate_eye || e.code() == errc::degenerate_vector) continue;
      throw;
    }
    std::size_t c = 0;
    for (double a : f.au) sums[c++] += a;
    sums[c++] += f.smile_p;
    sums[c++] += f.left_eye_open_p;
    sums[c++] += f.right_eye_open_p;
    sums[c++] += f.head.yaw;
    sums[c++] += f.head.pitch;
    sums[c++] += f.head.roll;
    sums[c++] += ear_l;
    sums[c++] += ear_r;
    times.push_back(f.timestamp_ms);
    projected.push_back(project(pca, raw));
  }
  if (projected.empty())
    throw error(errc::empty_session, "no usable frame in session " + s.session_id);

  const double n = static_cast<double>(projected.size());
  feature_vector out;
  out.schema = schema;
  out.values.reserve(schema->size());
  for (double v : sums) out.values.push_back(v / n);

  Eigen::VectorXd mean_pc = Eigen::VectorXd::Zero(k);
  for (const auto& p : projected) mean_pc += p;
  mean_pc /= n;
  Eigen::VectorXd mean_vel = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd mean_acc = Eigen::VectorXd::Zero(k);
  if (projected.size() >= 2) {
    auto kin = angular_kinematics(times, projected);
    for (const auto& v : kin.velocity) mean_vel += v;
    mean_vel /= static_cast<double>(kin.velocity.size());
    if (!kin.acceleration.empty()) {
      for (const auto& a : kin.acceleration) mean_acc += a;
      mean_acc /= static_cast<double>(kin.acceleration.size());
    }
  }
  for (int i = 0; i < k; ++i) out.values.push_back(mean_pc(i));
  for (int i = 0; i < k; ++i) out.values.push_back(mean_vel(i));
  if (cfg.include_acceleration)
    for (int i = 0; i < k; ++i) out.values.push_back(mean_acc(i));
  if (out.values.size() != schema->size())
    throw error(errc::schema_mismatch, "feature count does not match schema");
  return out;
}

/// Raw IVA rows for PCA fitting: every usable frame, or an evenly strided subsample of at most
/// `max_rows` frames when there are more.
inline Eigen::MatrixXd collect_iva_rows(std::span<const session* const> sessions,
                                        const featurizer_config& cfg, std::size_t max_rows) {
  std::vector<const frame_descriptor*> frames;
  for (const session* s : sessions)
    for (const auto& f : s->frames) frames.push_back(&f);
  std::vector<std::size_t> picks;
  if (max_rows == 0 || frames.size() <= max_rows) {
    for (std::size_t i = 0; i < frames.size(); ++i) picks.push_back(i);
  } else {
    for (std::size_t i = 0; i < max_rows; ++i) picks.push_back(i * frames.size() / max_rows);
  }
  const std::size_t d = cfg.triangles.pairs.size();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(picks.size()), static_cast<Eigen::Index>(d));
  Eigen::VectorXd buf(d);
  Eigen::Index used = 0;
  for (std::size_t i : picks) {
    try {
      iva_raw_into(frames[i]->landmarks, cfg.triangles, std::span<double>(buf.data(), d));
    } catch (const error& e) {
      if (e.code() == errc::degenerate_vector) continue;
      throw;
    }
    rows.row(used++) = buf.transpose();
  }
  rows.conservativeResize(used, Eigen::NoChange);
  return rows;
}

}  // namespace moodcam::features
