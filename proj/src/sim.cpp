#include "gromp/sim.hpp"

#include "gromp/error.hpp"

#include <cmath>

namespace gromp {

namespace {

Eigen::VectorXd sample_start_coords(const TaskSpec& task, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd coords = task.goal_twist_coords;
  for (Eigen::Index j = 0; j < coords.size(); ++j) {
    coords(j) += task.start_min(j) + unit(rng) * (task.start_max(j) - task.start_min(j));
  }
  return coords;
}

Pose sample_grasp(const TaskSpec& task, std::mt19937_64& rng) {
  InHandPlanar grasp = task.grasp_nominal;
  if (task.grasp_sigma_translation > 0.0) {
    std::normal_distribution<double> n(0.0, task.grasp_sigma_translation);
    grasp.y += n(rng);
    grasp.z += n(rng);
  }
  if (task.grasp_sigma_rotation > 0.0) {
    std::normal_distribution<double> n(0.0, task.grasp_sigma_rotation);
    grasp.theta += n(rng);
  }
  return planar_pose(task.grasp_x, grasp);
}

Eigen::Matrix3d rotation_about_x(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d r;
  // clang-format off
  r << 1.0, 0.0, 0.0,
       0.0,   c,  -s,
       0.0,   s,   c;
  // clang-format on
  return r;
}

// Rewrites only the in-plane entries so the off-plane ones stay bit-identical.
Pose with_planar(const Pose& a_to, double y, double z, std::optional<double> theta) {
  Pose out = a_to;
  out.translation.y() = y;
  out.translation.z() = z;
  if (theta) {
    const Eigen::Matrix3d r = rotation_about_x(*theta);
    out.rotation.bottomRightCorner<2, 2>() = r.bottomRightCorner<2, 2>();
  }
  return out;
}

}  // namespace

InHandPlanar planar_coordinates(const Pose& a_to) {
  return InHandPlanar{a_to.translation.y(), a_to.translation.z(),
                      std::atan2(a_to.rotation(2, 1), a_to.rotation(1, 1))};
}

Pose planar_pose(double x_offset, const InHandPlanar& planar) {
  Pose out;
  out.rotation = rotation_about_x(planar.theta);
  out.translation = {x_offset, planar.y, planar.z};
  return out;
}

InitialCondition sample_initial_condition(const TaskSpec& task, std::mt19937_64& rng) {
  const Eigen::VectorXd coords = sample_start_coords(task, rng);
  return InitialCondition{task.pose_at(coords), sample_grasp(task, rng)};
}

DemonstrationDataset generate_demonstrations(const TaskSpec& task, int n_episodes,
                                             double noise_sigma, std::mt19937_64& rng) {
  if (n_episodes < 1) throw Error(ErrorCode::InvalidArgument, "need at least one episode");
  if (noise_sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "negative demo noise");
  validate(task);

  const int length = task.demo_length;
  const auto k = static_cast<Eigen::Index>(task.true_basis.size());
  std::normal_distribution<double> jitter(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);

  DemonstrationDataset dataset;
  dataset.episodes.reserve(static_cast<std::size_t>(n_episodes));
  for (int e = 0; e < n_episodes; ++e) {
    const Eigen::VectorXd start = sample_start_coords(task, rng);
    Pose a_to = sample_grasp(task, rng);

    // Straight line in manifold coordinates, i.e. a geodesic of the planted subgroup.
    std::vector<Pose> desired;
    desired.reserve(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) {
      const double s = static_cast<double>(t) / static_cast<double>(length - 1);
      Eigen::VectorXd c = start + s * (task.goal_twist_coords - start);
      if (noise_sigma > 0.0 && t + 1 < length) {
        for (Eigen::Index j = 0; j < k; ++j) c(j) += (1.0 - s) * jitter(rng);
      }
      desired.push_back(task.pose_at(c));
    }

    Episode episode;
    episode.id = e;
    episode.records.reserve(static_cast<std::size_t>(length));
    Pose a_st = compose(desired[0], inverse(a_to));
    episode.records.push_back(PoseRecord::from_frames(0, a_st, a_to));
    for (int t = 1; t < length; ++t) {
      // The expert aims with the grasp it currently has, the grasp slips
      // under that motion, and the expert re-aims with the new grasp.
      const Pose& target = desired[static_cast<std::size_t>(t)];
      const Pose provisional = compose(target, inverse(a_to));
      const Twist motion = relative_twist(a_st, provisional);
      a_to = step_slip(a_to, motion, task.contact_depth(target), task.slip, rng);
      a_st = compose(target, inverse(a_to));
      episode.records.push_back(PoseRecord::from_frames(t, a_st, a_to));
    }
    dataset.episodes.push_back(std::move(episode));
  }
  return dataset;
}

Pose step_slip(const Pose& a_to, const Twist& commanded_motion, double contact_depth,
               const SlipParams& params, std::mt19937_64& rng) {
  const InHandPlanar now = planar_coordinates(a_to);
  double dy = 0.0;
  double dz = 0.0;
  double dtheta = 0.0;
  if (contact_depth > params.contact_threshold) {
    // The held object lags the tool while it is pressed against the part.
    dy -= params.slip_gain * commanded_motion.v.y();
    dz -= params.slip_gain * commanded_motion.v.z();
    dtheta -= params.slip_gain * commanded_motion.omega.x();
  }
  if (params.slip_noise_sigma > 0.0) {
    std::normal_distribution<double> n(0.0, params.slip_noise_sigma);
    dy += n(rng);
    dz += n(rng);
    dtheta += n(rng);
  }
  std::optional<double> theta;
  if (dtheta != 0.0) theta = now.theta + dtheta;
  return with_planar(a_to, now.y + dy, now.z + dz, theta);
}

Pose observe_in_hand(const Pose& a_to, double obs_sigma, std::mt19937_64& rng) {
  if (obs_sigma <= 0.0) return a_to;
  std::normal_distribution<double> n(0.0, obs_sigma);
  const InHandPlanar now = planar_coordinates(a_to);
  const double y = now.y + n(rng);
  const double z = now.z + n(rng);
  const double theta = now.theta + n(rng);
  return with_planar(a_to, y, z, theta);
}

}  // namespace gromp
