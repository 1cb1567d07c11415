#pragma once

// Nonstationary epsilon-greedy bandit over projection dimensionalities
// i = 0..6. Values start from the projection-loss prior, Q0(i) = 1 - L^i,
// and track the success ratio with a constant step size.

#include "gromp/manifold.hpp"

#include <array>
#include <random>

namespace gromp {

inline constexpr int kNumArms = kNumProjections;
inline constexpr double kDefaultStepSize = 0.025;
inline constexpr double kDefaultExploration = 0.1;

struct BanditState {
  std::array<double, kNumArms> q{};
  std::array<int, kNumArms> alpha{};  // successes since the arm's last update
  std::array<int, kNumArms> beta{};   // failures since the arm's last update
  double gamma = kDefaultStepSize;
  double epsilon = kDefaultExploration;
  int trials_per_update = 1;
};

/// Throws InvalidArgument on non-finite losses or out-of-range settings.
BanditState init_values(const LossVector& losses, double gamma = kDefaultStepSize,
                        double epsilon = kDefaultExploration, int trials_per_update = 1);

/// alpha / (alpha + beta). Throws NoTrials when both are zero.
double reward(int successes, int failures);

/// Q(arm) += gamma * (r - Q(arm)). Throws ArmOutOfRange.
BanditState update(const BanditState& state, int arm, double r);

/// Counts one trial outcome for `arm`; once the arm has accumulated
/// `trials_per_update` outcomes its reward is applied and its counts reset.
BanditState record_trial(const BanditState& state, int arm, bool success);

/// Highest Q, ties to the lowest index.
int greedy_arm(const BanditState& state);

/// Greedy with probability 1 - epsilon, otherwise uniform over all arms.
int select(const BanditState& state, std::mt19937_64& rng);

}  // namespace gromp
