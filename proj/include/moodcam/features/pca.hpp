#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "moodcam/core/error.hpp"

namespace moodcam::features {

/// Mean-centered PCA basis. Row r of `components` is the r-th principal axis.
struct pca_model {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;
  Eigen::VectorXd explained_variance;

  Eigen::Index input_dim() const { return mean.size(); }
  Eigen::Index output_dim() const { return components.rows(); }
};

inline constexpr int default_pca_components = 10;

/// Top-k eigenvectors of the sample covariance of `rows` (one observation per row), in descending
/// eigenvalue order. Each component is signed so its largest-magnitude entry is positive.
inline pca_model fit_pca(const Eigen::MatrixXd& rows, int k = default_pca_components) {
  if (k <= 0 || rows.rows() < k || rows.cols() < k || rows.rows() < 2)
    throw error(errc::insufficient_data, "PCA needs at least " + std::to_string(k) +
                                             " rows and columns, got " +
                                             std::to_string(rows.rows()) + "x" +
                                             std::to_string(rows.cols()));
  pca_model model;
  model.mean = rows.colwise().mean().transpose();
  Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
  Eigen::MatrixXd cov = (centered.adjoint() * centered) / static_cast<double>(rows.rows() - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw error(errc::insufficient_data, "covariance eigendecomposition failed");

  const Eigen::Index d = rows.cols();
  model.components.resize(k, d);
  model.explained_variance.resize(k);
  for (int r = 0; r < k; ++r) {
    Eigen::Index src = d - 1 - r;  // eigenvalues come out ascending
    Eigen::VectorXd axis = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < d; ++j)
      if (std::abs(axis(j)) > std::abs(axis(arg))) arg = j;
    if (axis(arg) < 0) axis = -axis;
    model.components.row(r) = axis.transpose();
    model.explained_variance(r) = std::max(0.0, solver.eigenvalues()(src));
  }
  return model;
}

/// components * (v - mean)
inline Eigen::VectorXd project(const pca_model& model, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != model.input_dim())
    throw error(errc::dimension_mismatch, "vector has " + std::to_string(v.size()) +
                                              " entries, model expects " +
                                              std::to_string(model.input_dim()));
  return model.components * (v - model.mean);
}

}  // namespace moodcam::features
