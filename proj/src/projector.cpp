#include "gromp/projector.hpp"

#include "gromp/error.hpp"

#include <string>

namespace gromp {

Pose project_object_pose(const Pose& a_so, const TaskManifold& m) {
  if (!m.dim) throw Error(ErrorCode::DimOutOfRange, "manifold dimensionality is unset");
  const int i = *m.dim;
  if (i < 0 || i > kTangentDim) {
    throw Error(ErrorCode::DimOutOfRange, "projection dimension " + std::to_string(i));
  }
  if (i == 0) return m.mean;

  // Full-rank projection is the identity.
  if (i == kTangentDim) return a_so;

  const Vector6d row = normalized_coordinates(a_so, m);

  const auto kept = m.basis.leftCols(i);
  const Vector6d projected = kept * (kept.transpose() * row);
  return compose(m.mean, exp_se3(denormalize(projected, m.scales)));
}

Pose robot_pose_from_projection(const Pose& projected_a_so, const Pose& a_to) {
  return compose(projected_a_so, inverse(a_to));
}

ActionTrajectory project_action_trajectory(const ActionTrajectory& actions, const Pose& a_to,
                                           const TaskManifold& m) {
  if (m.dim && *m.dim == kTangentDim) return actions;

  ActionTrajectory out;
  out.robot_poses.reserve(actions.robot_poses.size());
  for (std::size_t k = 0; k < actions.robot_poses.size(); ++k) {
    try {
      const Pose a_so = compose(actions.robot_poses[k], a_to);
      out.robot_poses.push_back(robot_pose_from_projection(project_object_pose(a_so, m), a_to));
    } catch (const Error& e) {
      throw Error(e.code(), "action step " + std::to_string(k) + ": " + e.what(), k);
    }
  }
  return out;
}

}  // namespace gromp
