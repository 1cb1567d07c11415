#include "gromp/liegroup.hpp"

#include "gromp/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gromp {

namespace {

Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d& r) {
  const double residual = (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
  if (residual > kOrthonormalityTolerance) return nearest_rotation(r);
  return r;
}

// Coefficients of the SE(3) left Jacobian V = I + b*W + c*W^2.
void v_coefficients(double theta, double& b, double& c) {
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    b = 0.5 - t2 / 24.0;
    c = 1.0 / 6.0 - t2 / 120.0;
    return;
  }
  const double half_sin = std::sin(0.5 * theta);
  b = 2.0 * half_sin * half_sin / (theta * theta);
  c = (theta - std::sin(theta)) / (theta * theta * theta);
}

// V^-1 = I - W/2 + d*W^2.
double v_inverse_coefficient(double theta) {
  if (theta < kSmallAngle) return 1.0 / 12.0 + theta * theta / 720.0;
  const double half = 0.5 * theta;
  return (1.0 - half * std::cos(half) / std::sin(half)) / (theta * theta);
}

}  // namespace

Twist Twist::from_vector(const Vector6d& xi) {
  return Twist{xi.head<3>(), xi.tail<3>()};
}

Vector6d Twist::vector() const {
  Vector6d xi;
  xi << omega, v;
  return xi;
}

Pose Pose::from_translation(const Eigen::Vector3d& t) {
  Pose p;
  p.translation = t;
  return p;
}

Pose Pose::from_rotation(const Eigen::Matrix3d& r) {
  Pose p;
  p.rotation = r;
  return p;
}

Pose Pose::operator*(const Pose& other) const { return compose(*this, other); }

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

double Pose::orthonormality_residual() const {
  return (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).norm();
}

bool Pose::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  return orthonormality_residual() <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

Eigen::Matrix3d hat(const Eigen::Vector3d& omega) {
  Eigen::Matrix3d s;
  // clang-format off
  s <<        0.0, -omega.z(),  omega.y(),
        omega.z(),        0.0, -omega.x(),
       -omega.y(),  omega.x(),        0.0;
  // clang-format on
  return s;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& skew) {
  return {skew(2, 1), skew(0, 2), skew(1, 0)};
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

double rotation_angle(const Eigen::Matrix3d& r) {
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  const double s = 0.5 * vee(r - r.transpose()).norm();
  return std::atan2(s, c);
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  const Eigen::Matrix3d w = hat(omega);
  double a = 0.0;
  double b = 0.0;
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    const double half_sin = std::sin(0.5 * theta);
    a = std::sin(theta) / theta;
    b = 2.0 * half_sin * half_sin / (theta * theta);
  }
  return Eigen::Matrix3d::Identity() + a * w + b * w * w;
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& r) {
  const Eigen::Vector3d anti = vee(r - r.transpose());
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  const double s = 0.5 * anti.norm();
  const double theta = std::atan2(s, c);

  if (theta > std::numbers::pi - kLogAngleMargin) {
    throw Error(ErrorCode::AngleNearPi,
                "rotation angle " + std::to_string(theta) + " is too close to pi");
  }
  if (theta < kSmallAngle) return 0.5 * (1.0 + theta * theta / 6.0) * anti;

  if (theta < 3.0) return (0.5 * theta / s) * anti;

  // sin(theta) is small here; recover the axis from the symmetric part instead.
  const Eigen::Matrix3d sym = 0.5 * (r + r.transpose()) - c * Eigen::Matrix3d::Identity();
  Eigen::Index k = 0;
  sym.diagonal().maxCoeff(&k);
  Eigen::Vector3d axis = sym.col(k).normalized();
  if (axis.dot(anti) < 0.0) axis = -axis;
  return theta * axis;
}

Pose exp_se3(const Twist& xi) {
  const double theta = xi.omega.norm();
  double b = 0.0;
  double c = 0.0;
  v_coefficients(theta, b, c);
  const Eigen::Matrix3d w = hat(xi.omega);
  const Eigen::Matrix3d v = Eigen::Matrix3d::Identity() + b * w + c * w * w;

  Pose out;
  out.rotation = exp_so3(xi.omega);
  out.translation = v * xi.v;
  return out;
}

Twist log_se3(const Pose& pose) {
  Twist xi;
  xi.omega = log_so3(pose.rotation);
  const double theta = xi.omega.norm();
  const Eigen::Matrix3d w = hat(xi.omega);
  const Eigen::Matrix3d v_inv =
      Eigen::Matrix3d::Identity() - 0.5 * w + v_inverse_coefficient(theta) * w * w;
  xi.v = v_inv * pose.translation;
  return xi;
}

Pose compose(const Pose& a, const Pose& b) {
  Pose out;
  out.rotation = orthonormalized(a.rotation * b.rotation);
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Pose inverse(const Pose& a) {
  Pose out;
  out.rotation = a.rotation.transpose();
  out.translation = -(out.rotation * a.translation);
  return out;
}

Twist relative_twist(const Pose& from, const Pose& to) {
  return log_se3(compose(inverse(from), to));
}

Pose geodesic_mean(std::span<const Pose> poses, const KarcherOptions& options) {
  if (poses.empty()) throw Error(ErrorCode::EmptyInput, "geodesic mean of an empty set");

  Pose mean = poses.front();
  const double n = static_cast<double>(poses.size());
  for (int iteration = 0; iteration <= options.max_iterations; ++iteration) {
    const Pose mean_inv = inverse(mean);
    Vector6d sum = Vector6d::Zero();
    for (std::size_t i = 0; i < poses.size(); ++i) {
      try {
        sum += log_se3(compose(mean_inv, poses[i])).vector();
      } catch (const Error& e) {
        throw Error(e.code(), "pose " + std::to_string(i) + " in geodesic mean", i);
      }
    }
    const Vector6d step = sum / n;
    if (step.norm() < options.tolerance) return mean;
    if (iteration == options.max_iterations) break;
    mean = compose(mean, exp_se3(Twist::from_vector(step)));
  }
  throw Error(ErrorCode::NoConvergence,
              "geodesic mean did not converge in " + std::to_string(options.max_iterations) +
                  " iterations");
}

double max_abs_difference(const Pose& a, const Pose& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace gromp
