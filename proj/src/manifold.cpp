#include "gromp/manifold.hpp"

#include "gromp/error.hpp"
#include "gromp/log.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace gromp {

namespace {

void check_dim(int i) {
  if (i < 0 || i > kTangentDim) {
    throw Error(ErrorCode::DimOutOfRange,
                "projection dimension " + std::to_string(i) + " outside 0..6");
  }
}

// Largest-magnitude entry positive; ties go to the lowest index.
void canonicalize_signs(Matrix6d& basis) {
  for (int c = 0; c < kTangentDim; ++c) {
    int best = 0;
    for (int r = 1; r < kTangentDim; ++r) {
      if (std::abs(basis(r, c)) > std::abs(basis(best, c))) best = r;
    }
    if (basis(best, c) < 0.0) basis.col(c) = -basis.col(c);
  }
}

}  // namespace

TaskManifold TaskManifold::with_dim(int i) const {
  check_dim(i);
  TaskManifold out = *this;
  out.dim = i;
  return out;
}

int ManifoldFit::prior_dim() const {
  int best = 0;
  for (int i = 1; i < kNumProjections; ++i) {
    if (losses[i] < losses[best]) best = i;
  }
  return best;
}

Vector6d normalize(const Twist& xi, const NormalizationScales& scales) {
  Vector6d row;
  row << xi.omega / scales.omega, xi.v / scales.v;
  return row;
}

Twist denormalize(const Vector6d& row, const NormalizationScales& scales) {
  return Twist{row.head<3>() * scales.omega, row.tail<3>() * scales.v};
}

std::vector<Twist> lift_to_tangent(std::span<const Pose> poses, const Pose& mean) {
  const Pose mean_inv = inverse(mean);
  std::vector<Twist> out;
  out.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    try {
      out.push_back(log_se3(compose(mean_inv, poses[i])));
    } catch (const Error& e) {
      throw Error(e.code(), "lifting pose " + std::to_string(i) + ": " + e.what(), i);
    }
  }
  return out;
}

NormalizedTwists normalize_twists(std::span<const Twist> twists) {
  if (twists.empty()) throw Error(ErrorCode::EmptyInput, "no twists to normalize");

  double max_omega = 0.0;
  double max_v = 0.0;
  for (const auto& xi : twists) {
    max_omega = std::max(max_omega, xi.omega.norm());
    max_v = std::max(max_v, xi.v.norm());
  }

  NormalizedTwists out;
  out.scales.omega = max_omega < kScaleFloor ? 1.0 : max_omega;
  out.scales.v = max_v < kScaleFloor ? 1.0 : max_v;
  out.rows.resize(static_cast<Eigen::Index>(twists.size()), kTangentDim);
  for (std::size_t t = 0; t < twists.size(); ++t) {
    out.rows.row(static_cast<Eigen::Index>(t)) = normalize(twists[t], out.scales).transpose();
  }
  return out;
}

PcaBasis pca_basis(const TwistMatrix& xi) {
  if (xi.rows() == 0) throw Error(ErrorCode::SvdFailure, "empty twist matrix");
  if (!xi.allFinite()) throw Error(ErrorCode::SvdFailure, "twist matrix has non-finite entries");

  const double mean_norm = xi.colwise().mean().norm();
  if (mean_norm > kCenteringWarning) {
    warn("normalized twists are not zero-mean (mean row norm " + std::to_string(mean_norm) +
         "); PCA proceeds uncentered");
  }

  const Eigen::MatrixXd dense = xi;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error(ErrorCode::SvdFailure, "SVD did not converge");

  PcaBasis out;
  out.basis = svd.matrixV();
  out.singular_values.setZero();
  const auto& sv = svd.singularValues();
  out.singular_values.head(sv.size()) = sv;
  canonicalize_signs(out.basis);
  return out;
}

TwistMatrix project_twist_rows(const TwistMatrix& xi, const Matrix6d& basis, int i) {
  check_dim(i);
  if (i == 0) return TwistMatrix::Zero(xi.rows(), kTangentDim);
  if (i == kTangentDim) return xi;
  const auto kept = basis.leftCols(i);
  return (xi * kept) * kept.transpose();
}

double projection_loss(const TwistMatrix& xi, const Matrix6d& basis, int i) {
  check_dim(i);
  const double signal = xi.rowwise().norm().sum();
  if (signal <= kScaleFloor * static_cast<double>(std::max<Eigen::Index>(xi.rows(), 1))) {
    throw Error(ErrorCode::DegenerateDataset, "all tangent twists are zero");
  }
  const TwistMatrix projected = project_twist_rows(xi, basis, i);
  const double residual = (xi - projected).rowwise().norm().sum();
  return residual / signal + static_cast<double>(i) / kTangentDim;
}

LossVector projection_losses(const TwistMatrix& xi, const Matrix6d& basis) {
  LossVector losses{};
  for (int i = 0; i < kNumProjections; ++i) {
    try {
      losses[i] = projection_loss(xi, basis, i);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateDataset) throw;
      // Stationary data: every projection is exact.
      losses[i] = static_cast<double>(i) / kTangentDim;
    }
  }
  return losses;
}

ManifoldFit fit_task_manifold(std::span<const Pose> object_poses) {
  if (object_poses.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no pose records");

  ManifoldFit fit;
  try {
    fit.manifold.mean = geodesic_mean(object_poses);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("geodesic mean: ") + e.what(), e.index());
  }
  const std::vector<Twist> twists = lift_to_tangent(object_poses, fit.manifold.mean);
  NormalizedTwists normalized = normalize_twists(twists);
  const PcaBasis pca = pca_basis(normalized.rows);

  fit.manifold.basis = pca.basis;
  fit.manifold.singular_values = pca.singular_values;
  fit.manifold.scales = normalized.scales;
  fit.losses = projection_losses(normalized.rows, pca.basis);
  return fit;
}

ManifoldFit fit_task_manifold(const DemonstrationDataset& dataset) {
  const std::vector<Pose> poses = dataset.object_poses();
  return fit_task_manifold(poses);
}

Vector6d normalized_coordinates(const Pose& a_so, const TaskManifold& m) {
  return normalize(log_se3(compose(inverse(m.mean), a_so)), m.scales);
}

double off_manifold_residual(const Vector6d& row, const Matrix6d& basis, int i) {
  check_dim(i);
  const auto kept = basis.leftCols(i);
  return (row - kept * (kept.transpose() * row)).norm();
}

}  // namespace gromp
