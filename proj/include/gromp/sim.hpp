#pragma once

// Synthetic assembly simulator. Each task plants a low-dimensional
// subgroup of SE(3) that the grasped object follows toward a goal; the
// grasp itself slips in the tool's y-z plane, and a nearest-neighbour
// behaviour-cloned policy with injected noise drives the robot.

#include "gromp/dataset.hpp"
#include "gromp/liegroup.hpp"
#include "gromp/manifold.hpp"
#include "gromp/projector.hpp"

#include <Eigen/Core>

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gromp {

inline constexpr int kDefaultHorizon = 64;     // action prediction steps per rollout
inline constexpr int kDemoLength = 64;         // records per demonstration episode
inline constexpr int kDefaultExecuteSteps = 4;  // executed poses per prediction

struct SlipParams {
  double slip_gain = 0.3;           // dimensionless
  double slip_noise_sigma = 2e-4;   // meters and radians per executed step
  double contact_threshold = 0.0;   // meters of penetration before slip engages
};

/// In-hand pose restricted to the gripper pad plane: translation (y, z) in
/// meters and rotation theta about the tool x axis.
struct InHandPlanar {
  double y = 0.0;
  double z = 0.0;
  double theta = 0.0;
};

InHandPlanar planar_coordinates(const Pose& a_to);
/// Pose with rotation Rx(theta) and translation (x_offset, y, z).
Pose planar_pose(double x_offset, const InHandPlanar& planar);

struct TaskSpec {
  std::string name;
  int true_manifold_dim = 1;
  std::vector<Vector6d> true_basis;  // orthonormal raw twists (omega, v)
  Pose nominal_mean;
  Eigen::VectorXd goal_twist_coords;
  Eigen::VectorXd start_min;  // start coordinates are goal + U(start_min, start_max)
  Eigen::VectorXd start_max;
  double success_tol_translation = 0.002;  // meters
  double success_tol_rotation = 0.05;      // radians
  SlipParams slip;
  int horizon = kDefaultHorizon;
  int demo_length = kDemoLength;

  // Contact proxy: depth = mating_normal . (p - p_goal) + mating_offset.
  Eigen::Vector3d mating_normal = -Eigen::Vector3d::UnitZ();
  double mating_offset = 0.01;

  // Grasp: x offset is fixed, (y, z, theta) start at nominal + N(0, sigma).
  double grasp_x = 0.0;
  InHandPlanar grasp_nominal{0.0, 0.03, 0.0};
  double grasp_sigma_translation = 0.002;
  double grasp_sigma_rotation = 0.02;

  Pose pose_at(const Eigen::VectorXd& coords) const;
  Pose goal_pose() const { return pose_at(goal_twist_coords); }
  double contact_depth(const Pose& a_so) const;
  bool is_success(const Pose& a_so) const;
};

struct TaskOverrides {
  std::optional<double> success_tol_translation;
  std::optional<double> success_tol_rotation;
  std::optional<double> slip_gain;
  std::optional<double> slip_noise_sigma;
  std::optional<double> contact_threshold;
  std::optional<int> horizon;
};

/// Presets: "nut", "peg", "usb", "cover". Throws UnknownPreset.
TaskSpec make_task(const std::string& preset, const TaskOverrides& overrides = {});

/// Generic planted task around `mean` with the given raw twist basis; the
/// goal sits at the origin of the coordinates. Throws InvalidArgument if
/// the basis is not orthonormal.
TaskSpec make_planted_task(std::string name, std::vector<Vector6d> basis, Pose mean,
                           Eigen::VectorXd start_min, Eigen::VectorXd start_max);

/// Throws InvalidArgument when a TaskSpec invariant is violated.
void validate(const TaskSpec& task);

struct InitialCondition {
  Pose a_so;
  Pose a_to;
};

InitialCondition sample_initial_condition(const TaskSpec& task, std::mt19937_64& rng);

/// One episode per call; noise_sigma perturbs the on-manifold coordinates
/// with a taper that leaves the final record exactly at the goal.
DemonstrationDataset generate_demonstrations(const TaskSpec& task, int n_episodes,
                                             double noise_sigma, std::mt19937_64& rng);

Pose step_slip(const Pose& a_to, const Twist& commanded_motion, double contact_depth,
               const SlipParams& params, std::mt19937_64& rng);

Pose observe_in_hand(const Pose& a_to, double obs_sigma, std::mt19937_64& rng);

struct PolicyConfig {
  int neighbors = 4;
  double action_noise_sigma = 5e-4;   // meters, per predicted pose
  double rotation_noise_ratio = 10.0;  // radians of noise per meter of noise
  int action_horizon = kDefaultActionHorizon;
};

/// k-nearest-neighbour behaviour cloning over demonstration states. The
/// neighbours' next robot motions are blended in the tangent space and
/// applied from the current robot pose, so errors carry forward.
class SurrogatePolicy {
 public:
  /// Throws EmptyDataset.
  static SurrogatePolicy build(const DemonstrationDataset& dataset, const PolicyConfig& config);

  ActionTrajectory predict(const Pose& a_st, const Pose& a_to_observed,
                           std::mt19937_64& rng) const;

  const PolicyConfig& config() const { return config_; }
  std::size_t state_count() const { return features_.size(); }

 private:
  using Feature = Eigen::Matrix<double, 9, 1>;

  Feature feature(const Pose& a_st, const Pose& a_to) const;

  PolicyConfig config_;
  Pose robot_mean_;
  double rotation_weight_ = 1.0;
  std::vector<Feature> features_;
  std::vector<Vector6d> deltas_;  // state-major, action_horizon per state
};

enum class Termination { GoalReached, HorizonExhausted };

struct RolloutStep {
  Pose commanded_a_st;
  Pose realized_a_st;
  Pose a_to;
  Pose a_so;
  bool projection_applied = false;
};

struct RolloutOptions {
  int execute_steps = kDefaultExecuteSteps;
  double obs_sigma = 5e-4;
};

struct RolloutRecord {
  std::vector<RolloutStep> steps;
  std::optional<int> projection_index;
  bool success = false;
  Termination termination = Termination::HorizonExhausted;
  int prediction_steps = 0;
  int projection_fallbacks = 0;
};

RolloutRecord rollout(const TaskSpec& task, const SurrogatePolicy& policy,
                      const TaskManifold* manifold, const InitialCondition& start,
                      const RolloutOptions& options, std::mt19937_64& rng);

/// Samples the start from `rng`, then runs the rollout.
RolloutRecord rollout(const TaskSpec& task, const SurrogatePolicy& policy,
                      const TaskManifold* manifold, const RolloutOptions& options,
                      std::mt19937_64& rng);

/// FNV-1a over the executed object poses.
std::uint64_t trajectory_hash(const RolloutRecord& record);

}  // namespace gromp
