#pragma once

// Rollout-time projection: predicted object poses are pulled onto the
// learned task manifold and converted back into commanded robot poses
// through the current in-hand estimate, A_st = (proj A_so) * A_to^-1.

#include "gromp/liegroup.hpp"
#include "gromp/manifold.hpp"

#include <vector>

namespace gromp {

inline constexpr int kDefaultActionHorizon = 8;

struct ActionTrajectory {
  std::vector<Pose> robot_poses;  // A_st, one per predicted step
};

/// Projects a world->object pose onto the manifold's first `m.dim`
/// principal directions. Throws AngleNearPi, or DimOutOfRange when the
/// dimensionality is unset.
Pose project_object_pose(const Pose& a_so, const TaskManifold& m);

Pose robot_pose_from_projection(const Pose& projected_a_so, const Pose& a_to);

/// Applies the projection to every predicted robot pose using one in-hand
/// estimate for the whole horizon. AngleNearPi carries the step index.
ActionTrajectory project_action_trajectory(const ActionTrajectory& actions, const Pose& a_to,
                                           const TaskManifold& m);

}  // namespace gromp
