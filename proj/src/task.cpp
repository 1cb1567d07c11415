#include "gromp/error.hpp"
#include "gromp/sim.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace gromp {

namespace {

Vector6d axis(int k) {
  Vector6d e = Vector6d::Zero();
  e(k) = 1.0;
  return e;
}

enum : int { kOmegaZ = 2, kVx = 3, kVy = 4, kVz = 5 };

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) out(i++) = v;
  return out;
}

void apply(TaskSpec& task, const TaskOverrides& o) {
  if (o.success_tol_translation) task.success_tol_translation = *o.success_tol_translation;
  if (o.success_tol_rotation) task.success_tol_rotation = *o.success_tol_rotation;
  if (o.slip_gain) task.slip.slip_gain = *o.slip_gain;
  if (o.slip_noise_sigma) task.slip.slip_noise_sigma = *o.slip_noise_sigma;
  if (o.contact_threshold) task.slip.contact_threshold = *o.contact_threshold;
  if (o.horizon) task.horizon = *o.horizon;
}

}  // namespace

Pose TaskSpec::pose_at(const Eigen::VectorXd& coords) const {
  Vector6d xi = Vector6d::Zero();
  for (std::size_t j = 0; j < true_basis.size(); ++j) {
    xi += coords(static_cast<Eigen::Index>(j)) * true_basis[j];
  }
  return compose(nominal_mean, exp_se3(Twist::from_vector(xi)));
}

double TaskSpec::contact_depth(const Pose& a_so) const {
  return mating_normal.dot(a_so.translation - goal_pose().translation) + mating_offset;
}

bool TaskSpec::is_success(const Pose& a_so) const {
  const Pose goal = goal_pose();
  const double dt = (a_so.translation - goal.translation).norm();
  const double dr = rotation_angle(goal.rotation.transpose() * a_so.rotation);
  return dt <= success_tol_translation && dr <= success_tol_rotation;
}

void validate(const TaskSpec& task) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "task '" + task.name + "': " + what);
  };
  const auto k = static_cast<Eigen::Index>(task.true_basis.size());
  if (k < 1 || k > kTangentDim) fail("basis must hold 1..6 directions");
  if (task.true_manifold_dim != static_cast<int>(k)) fail("dimension does not match basis size");
  Eigen::MatrixXd b(kTangentDim, k);
  for (Eigen::Index j = 0; j < k; ++j) b.col(j) = task.true_basis[static_cast<std::size_t>(j)];
  if ((b.transpose() * b - Eigen::MatrixXd::Identity(k, k)).norm() > 1e-10) {
    fail("basis directions are not orthonormal");
  }
  if (task.goal_twist_coords.size() != k || task.start_min.size() != k ||
      task.start_max.size() != k) {
    fail("coordinate vectors must match the basis size");
  }
  if ((task.start_max - task.start_min).minCoeff() < 0.0) fail("start_max below start_min");
  if (!(task.success_tol_translation > 0.0) || !(task.success_tol_rotation > 0.0)) {
    fail("tolerances must be strictly positive");
  }
  if (task.slip.slip_gain < 0.0 || task.slip.slip_noise_sigma < 0.0 ||
      task.slip.contact_threshold < 0.0) {
    fail("slip parameters must be non-negative");
  }
  if (task.horizon < 1) fail("horizon must be at least 1");
  if (task.demo_length < 2) fail("demonstrations need at least 2 records");
  if (!task.nominal_mean.is_valid()) fail("nominal mean is not a valid pose");
}

TaskSpec make_planted_task(std::string name, std::vector<Vector6d> basis, Pose mean,
                           Eigen::VectorXd start_min, Eigen::VectorXd start_max) {
  TaskSpec task;
  task.name = std::move(name);
  task.true_manifold_dim = static_cast<int>(basis.size());
  task.goal_twist_coords = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  task.true_basis = std::move(basis);
  task.nominal_mean = mean;
  task.start_min = std::move(start_min);
  task.start_max = std::move(start_max);
  validate(task);
  return task;
}

TaskSpec make_task(const std::string& preset, const TaskOverrides& overrides) {
  const Pose table = Pose::from_translation({0.45, 0.0, 0.15});
  TaskSpec task;
  if (preset == "nut") {
    // Thread engagement: spin about the bolt axis and descend along it.
    task = make_planted_task("nut", {axis(kOmegaZ), axis(kVz)}, table, vec({-1.0, 0.01}),
                             vec({1.0, 0.04}));
    task.mating_offset = 0.008;
  } else if (preset == "peg") {
    // Slide across the plate, then insert downward.
    task = make_planted_task("peg", {axis(kVx), axis(kVz)}, table, vec({-0.03, 0.015}),
                             vec({0.03, 0.045}));
    task.mating_offset = 0.01;
  } else if (preset == "usb") {
    // Horizontal insertion along -x with lateral alignment in y.
    task = make_planted_task("usb", {axis(kVx), axis(kVy)}, table, vec({0.015, -0.03}),
                             vec({0.045, 0.03}));
    task.mating_normal = -Eigen::Vector3d::UnitX();
    task.mating_offset = 0.008;
  } else if (preset == "cover") {
    task = make_planted_task("cover", {axis(kVx), axis(kVy), axis(kVz)}, table,
                             vec({-0.03, -0.03, 0.01}), vec({0.03, 0.03, 0.04}));
    task.mating_offset = 0.005;
  } else {
    throw Error(ErrorCode::UnknownPreset, "unknown task preset '" + preset + "'");
  }
  apply(task, overrides);
  validate(task);
  return task;
}

}  // namespace gromp
