#pragma once

// SE(3) / so(3) primitives. Twists are ordered (omega, v): rotational part
// first, in radians, then translational part in meters.

#include <Eigen/Core>

#include <span>
#include <vector>

namespace gromp {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Rotation angles closer than this to pi are rejected by the log map.
inline constexpr double kLogAngleMargin = 1e-6;
/// Below this rotation angle the Rodrigues coefficients use their series.
inline constexpr double kSmallAngle = 1e-8;
/// Orthonormality residual that triggers re-projection onto SO(3).
inline constexpr double kOrthonormalityTolerance = 1e-9;

struct Twist {
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();

  static Twist zero() { return {}; }
  static Twist from_vector(const Vector6d& xi);
  Vector6d vector() const;
};

/// Rigid transform. Composition reads left to right as frame chaining:
/// `a_st * a_to == a_so`.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return {}; }
  static Pose from_translation(const Eigen::Vector3d& t);
  static Pose from_rotation(const Eigen::Matrix3d& r);

  Pose operator*(const Pose& other) const;
  Eigen::Matrix4d matrix() const;

  /// Frobenius norm of R^T R - I.
  double orthonormality_residual() const;
  bool is_valid(double tol = kOrthonormalityTolerance) const;
};

Eigen::Matrix3d hat(const Eigen::Vector3d& omega);
Eigen::Vector3d vee(const Eigen::Matrix3d& skew);

/// Nearest rotation in the Frobenius sense (polar decomposition).
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m);

/// Rotation angle in [0, pi].
double rotation_angle(const Eigen::Matrix3d& r);

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& omega);
/// Throws AngleNearPi when the angle is within kLogAngleMargin of pi.
Eigen::Vector3d log_so3(const Eigen::Matrix3d& r);

Pose exp_se3(const Twist& xi);
Twist log_se3(const Pose& pose);

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& a);

/// Left-invariant difference log(from^-1 * to).
Twist relative_twist(const Pose& from, const Pose& to);

struct KarcherOptions {
  double tolerance = 1e-10;
  int max_iterations = 100;
};

/// Karcher mean: mu <- mu * exp(mean_i log(mu^-1 A_i)), starting at poses[0].
/// Throws EmptyInput, NoConvergence, or AngleNearPi (with the pose index).
Pose geodesic_mean(std::span<const Pose> poses, const KarcherOptions& options = {});

/// Maximum absolute entry difference between the homogeneous matrices.
double max_abs_difference(const Pose& a, const Pose& b);

}  // namespace gromp
