#pragma once

// Task-space manifold learned by principal geodesic analysis of the
// expert object poses: lift to the tangent space at the geodesic mean,
// normalize the rotational and translational blocks separately, and take
// the right singular vectors of the stacked twist matrix as the basis.

#include "gromp/dataset.hpp"
#include "gromp/liegroup.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace gromp {

inline constexpr int kTangentDim = 6;
inline constexpr int kNumProjections = kTangentDim + 1;
/// Raw block maxima below this fall back to a unit scale.
inline constexpr double kScaleFloor = 1e-12;
/// Mean normalized row norm above which the zero-mean assumption is flagged.
inline constexpr double kCenteringWarning = 0.1;

using TwistMatrix = Eigen::Matrix<double, Eigen::Dynamic, kTangentDim>;
using LossVector = std::array<double, kNumProjections>;

struct NormalizationScales {
  double omega = 1.0;  // radians
  double v = 1.0;      // meters
};

struct TaskManifold {
  Pose mean;
  Matrix6d basis = Matrix6d::Identity();  // columns p_1..p_6
  Vector6d singular_values = Vector6d::Zero();
  NormalizationScales scales;
  std::optional<int> dim;

  /// Copy with the projection dimensionality set. Throws DimOutOfRange.
  TaskManifold with_dim(int i) const;
};

struct NormalizedTwists {
  TwistMatrix rows;
  NormalizationScales scales;
};

struct PcaBasis {
  Matrix6d basis;
  Vector6d singular_values;
};

struct ManifoldFit {
  TaskManifold manifold;  // dim unset
  LossVector losses{};

  /// argmin of the losses, ties to the lowest index.
  int prior_dim() const;
};

Vector6d normalize(const Twist& xi, const NormalizationScales& scales);
Twist denormalize(const Vector6d& row, const NormalizationScales& scales);

/// log(mean^-1 * pose) for every pose. AngleNearPi carries the pose index.
std::vector<Twist> lift_to_tangent(std::span<const Pose> poses, const Pose& mean);

/// Throws EmptyInput.
NormalizedTwists normalize_twists(std::span<const Twist> twists);

/// Throws SvdFailure on non-finite input or an empty matrix.
PcaBasis pca_basis(const TwistMatrix& xi);

/// Rows projected onto span(p_1..p_i). Throws DimOutOfRange.
TwistMatrix project_twist_rows(const TwistMatrix& xi, const Matrix6d& basis, int i);

/// Relative residual of the rank-i projection plus i/6. Throws
/// DegenerateDataset when every row is (numerically) zero.
double projection_loss(const TwistMatrix& xi, const Matrix6d& basis, int i);

/// Losses for i = 0..6 with the degenerate-dataset convention applied.
LossVector projection_losses(const TwistMatrix& xi, const Matrix6d& basis);

ManifoldFit fit_task_manifold(std::span<const Pose> object_poses);
ManifoldFit fit_task_manifold(const DemonstrationDataset& dataset);

/// Normalized tangent coordinates of `a_so` at the manifold mean.
Vector6d normalized_coordinates(const Pose& a_so, const TaskManifold& m);

/// Norm of the component of `row` outside span(p_1..p_i).
double off_manifold_residual(const Vector6d& row, const Matrix6d& basis, int i);

}  // namespace gromp
