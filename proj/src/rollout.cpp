#include "gromp/error.hpp"
#include "gromp/log.hpp"
#include "gromp/sim.hpp"

#include <cstring>
#include <string>

namespace gromp {

RolloutRecord rollout(const TaskSpec& task, const SurrogatePolicy& policy,
                      const TaskManifold* manifold, const InitialCondition& start,
                      const RolloutOptions& options, std::mt19937_64& rng) {
  if (options.execute_steps < 1 || options.execute_steps > policy.config().action_horizon) {
    throw Error(ErrorCode::InvalidArgument, "executed steps must lie in 1..action horizon");
  }
  if (manifold && (!manifold->dim || *manifold->dim < 0 || *manifold->dim > kTangentDim)) {
    throw Error(ErrorCode::DimOutOfRange, "rollout manifold needs a dimensionality in 0..6");
  }

  RolloutRecord record;
  if (manifold) record.projection_index = manifold->dim;
  record.steps.reserve(static_cast<std::size_t>(task.horizon * options.execute_steps));

  Pose a_to = start.a_to;
  Pose a_st = compose(start.a_so, inverse(a_to));

  for (int p = 0; p < task.horizon; ++p) {
    record.prediction_steps = p + 1;
    const Pose a_to_observed = observe_in_hand(a_to, options.obs_sigma, rng);
    const ActionTrajectory predicted = policy.predict(a_st, a_to_observed, rng);

    for (int e = 0; e < options.execute_steps; ++e) {
      Pose command = predicted.robot_poses[static_cast<std::size_t>(e)];
      bool projected = manifold != nullptr && *manifold->dim == kTangentDim;
      if (manifold && !projected) {
        try {
          const Pose a_so = compose(command, a_to_observed);
          command = robot_pose_from_projection(project_object_pose(a_so, *manifold),
                                               a_to_observed);
          projected = true;
        } catch (const Error& err) {
          if (err.code() != ErrorCode::AngleNearPi) throw;
          ++record.projection_fallbacks;
          warn("projection fell back to the raw action at prediction " + std::to_string(p) +
               ", step " + std::to_string(e) + ": " + err.what());
        }
      }

      const Twist motion = relative_twist(a_st, command);
      const double depth = task.contact_depth(compose(command, a_to));
      a_st = command;
      a_to = step_slip(a_to, motion, depth, task.slip, rng);
      record.steps.push_back(RolloutStep{command, a_st, a_to, compose(a_st, a_to), projected});
    }

    if (task.is_success(record.steps.back().a_so)) {
      record.success = true;
      record.termination = Termination::GoalReached;
      return record;
    }
  }
  record.termination = Termination::HorizonExhausted;
  return record;
}

RolloutRecord rollout(const TaskSpec& task, const SurrogatePolicy& policy,
                      const TaskManifold* manifold, const RolloutOptions& options,
                      std::mt19937_64& rng) {
  const InitialCondition start = sample_initial_condition(task, rng);
  return rollout(task, policy, manifold, start, options, rng);
}

std::uint64_t trajectory_hash(const RolloutRecord& record) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](double value) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &value, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& step : record.steps) {
    const Eigen::Matrix4d m = step.a_so.matrix();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 4; ++c) feed(m(r, c));
  }
  return h;
}

}  // namespace gromp
