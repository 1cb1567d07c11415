#include "gromp/error.hpp"
#include "gromp/sim.hpp"

#include <algorithm>
#include <numeric>

namespace gromp {

SurrogatePolicy SurrogatePolicy::build(const DemonstrationDataset& dataset,
                                       const PolicyConfig& config) {
  if (dataset.record_count() == 0) {
    throw Error(ErrorCode::EmptyDataset, "policy needs at least one demonstration record");
  }
  if (config.neighbors < 1 || config.action_horizon < 1 || config.action_noise_sigma < 0.0 ||
      config.rotation_noise_ratio < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "invalid policy configuration");
  }

  SurrogatePolicy policy;
  policy.config_ = config;

  std::vector<Pose> robot_poses;
  robot_poses.reserve(dataset.record_count());
  for (const auto& e : dataset.episodes)
    for (const auto& r : e.records) robot_poses.push_back(r.a_st);
  policy.robot_mean_ = geodesic_mean(robot_poses);

  // Units are balanced with the object-pose normalization scales.
  const std::vector<Pose> object_poses = dataset.object_poses();
  const Pose object_mean = geodesic_mean(object_poses);
  const NormalizedTwists object_twists =
      normalize_twists(lift_to_tangent(object_poses, object_mean));
  policy.rotation_weight_ = object_twists.scales.v / object_twists.scales.omega;

  const auto horizon = static_cast<std::size_t>(config.action_horizon);
  policy.features_.reserve(robot_poses.size());
  policy.deltas_.reserve(robot_poses.size() * horizon);
  for (const auto& e : dataset.episodes) {
    const auto n = e.records.size();
    for (std::size_t k = 0; k < n; ++k) {
      policy.features_.push_back(policy.feature(e.records[k].a_st, e.records[k].a_to));
      for (std::size_t j = 1; j <= horizon; ++j) {
        const std::size_t next = std::min(k + j, n - 1);
        policy.deltas_.push_back(
            relative_twist(e.records[k].a_st, e.records[next].a_st).vector());
      }
    }
  }
  return policy;
}

SurrogatePolicy::Feature SurrogatePolicy::feature(const Pose& a_st, const Pose& a_to) const {
  const Twist xi = relative_twist(robot_mean_, a_st);
  const InHandPlanar grasp = planar_coordinates(a_to);
  Feature f;
  f << rotation_weight_ * xi.omega, xi.v, grasp.y, grasp.z, rotation_weight_ * grasp.theta;
  return f;
}

ActionTrajectory SurrogatePolicy::predict(const Pose& a_st, const Pose& a_to_observed,
                                          std::mt19937_64& rng) const {
  const Feature query = feature(a_st, a_to_observed);
  const std::size_t count = features_.size();
  const std::size_t k = std::min(static_cast<std::size_t>(config_.neighbors), count);

  std::vector<double> dist(count);
  for (std::size_t s = 0; s < count; ++s) dist[s] = (features_[s] - query).squaredNorm();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto closer = [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    closer);

  const auto horizon = static_cast<std::size_t>(config_.action_horizon);
  const double sigma_v = config_.action_noise_sigma;
  const double sigma_omega = config_.action_noise_sigma * config_.rotation_noise_ratio;
  std::normal_distribution<double> unit(0.0, 1.0);

  ActionTrajectory out;
  out.robot_poses.reserve(horizon);
  for (std::size_t j = 0; j < horizon; ++j) {
    Vector6d blend = Vector6d::Zero();
    for (std::size_t n = 0; n < k; ++n) blend += deltas_[order[n] * horizon + j];
    blend /= static_cast<double>(k);

    Pose next = compose(a_st, exp_se3(Twist::from_vector(blend)));
    if (sigma_v > 0.0) {
      Twist noise;
      for (int c = 0; c < 3; ++c) noise.omega(c) = sigma_omega * unit(rng);
      for (int c = 0; c < 3; ++c) noise.v(c) = sigma_v * unit(rng);
      next = compose(next, exp_se3(noise));
    }
    out.robot_poses.push_back(next);
  }
  return out;
}

}  // namespace gromp
