#pragma once

// Shared helpers for the test suites: random sampling of group elements and
// reference implementations that do not go through the library code paths.

#include "gromp/dataset.hpp"
#include "gromp/liegroup.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <vector>

namespace gromp::testing {

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized();
}

/// Twist with rotation angle uniform in [0, max_angle) and translation
/// entries uniform in [-max_translation, max_translation].
inline Twist random_twist(std::mt19937_64& rng, double max_angle, double max_translation = 1.0) {
  std::uniform_real_distribution<double> angle(0.0, max_angle);
  std::uniform_real_distribution<double> t(-max_translation, max_translation);
  Twist xi;
  xi.omega = random_unit(rng) * angle(rng);
  xi.v = Eigen::Vector3d(t(rng), t(rng), t(rng));
  return xi;
}

inline Eigen::Matrix4d twist_matrix(const Twist& xi) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 1) = -xi.omega.z();
  m(0, 2) = xi.omega.y();
  m(1, 0) = xi.omega.z();
  m(1, 2) = -xi.omega.x();
  m(2, 0) = -xi.omega.y();
  m(2, 1) = xi.omega.x();
  m.block<3, 1>(0, 3) = xi.v;
  return m;
}

/// Generic matrix exponential of the 4x4 twist matrix.
inline Eigen::Matrix4d oracle_exp(const Twist& xi) { return twist_matrix(xi).exp(); }

/// Generic principal matrix logarithm, read back into (omega, v).
inline Twist oracle_log(const Eigen::Matrix4d& m) {
  const Eigen::Matrix4d l = m.log();
  Twist xi;
  xi.omega = Eigen::Vector3d(l(2, 1), l(0, 2), l(1, 0));
  xi.v = l.block<3, 1>(0, 3);
  return xi;
}

inline Pose pose_from_matrix(const Eigen::Matrix4d& m) {
  Pose p;
  p.rotation = m.block<3, 3>(0, 0);
  p.translation = m.block<3, 1>(0, 3);
  return p;
}

inline Pose random_pose(std::mt19937_64& rng, double max_angle = 3.0, double max_translation = 1.0) {
  return pose_from_matrix(oracle_exp(random_twist(rng, max_angle, max_translation)));
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// Object poses mean * exp(sum_k c_k xi_k) for random coefficients, each
/// sample paired with its negation so that `mean` is the exact Karcher mean.
inline std::vector<Pose> planted_poses(const Pose& mean, const std::vector<Vector6d>& directions,
                                       int pairs, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<Pose> out;
  for (int n = 0; n < pairs; ++n) {
    Vector6d xi = Vector6d::Zero();
    for (const auto& d : directions) xi += u(rng) * d;
    const Eigen::Matrix4d base = mean.matrix();
    out.push_back(pose_from_matrix(base * oracle_exp(Twist::from_vector(xi))));
    out.push_back(pose_from_matrix(base * oracle_exp(Twist::from_vector(-xi))));
  }
  return out;
}

/// Dataset holding the given object poses with an identity grasp.
inline DemonstrationDataset dataset_from_object_poses(const std::vector<Pose>& poses,
                                                      int episode_length) {
  DemonstrationDataset d;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (i % static_cast<std::size_t>(episode_length) == 0) {
      d.episodes.push_back(Episode{static_cast<int>(d.episodes.size()), {}});
    }
    auto& e = d.episodes.back();
    e.records.push_back(
        PoseRecord::from_frames(static_cast<int>(e.records.size()), poses[i], Pose::identity()));
  }
  return d;
}

/// Orthonormal set of `k` random 6-vectors (Gram-Schmidt of Gaussian draws).
inline std::vector<Vector6d> random_orthonormal(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Vector6d> out;
  while (static_cast<int>(out.size()) < k) {
    Vector6d v;
    for (int i = 0; i < 6; ++i) v(i) = n(rng);
    for (const auto& u : out) v -= u.dot(v) * u;
    if (v.norm() < 1e-6) continue;
    out.push_back(v.normalized());
  }
  return out;
}

}  // namespace gromp::testing
