#include "gromp/bandit.hpp"

#include "gromp/error.hpp"

#include <cmath>
#include <string>

namespace gromp {

namespace {

void check_arm(int arm) {
  if (arm < 0 || arm >= kNumArms) {
    throw Error(ErrorCode::ArmOutOfRange, "arm " + std::to_string(arm) + " outside 0..6");
  }
}

}  // namespace

BanditState init_values(const LossVector& losses, double gamma, double epsilon,
                        int trials_per_update) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "step size must lie in (0, 1]");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "exploration rate must lie in [0, 1]");
  }
  if (trials_per_update < 1) {
    throw Error(ErrorCode::InvalidArgument, "trials per update must be at least 1");
  }
  BanditState state;
  for (int i = 0; i < kNumArms; ++i) {
    if (!std::isfinite(losses[i])) {
      throw Error(ErrorCode::InvalidArgument, "non-finite projection loss", i);
    }
    state.q[i] = 1.0 - losses[i];
  }
  state.gamma = gamma;
  state.epsilon = epsilon;
  state.trials_per_update = trials_per_update;
  return state;
}

double reward(int successes, int failures) {
  if (successes < 0 || failures < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative trial counts");
  }
  if (successes + failures == 0) throw Error(ErrorCode::NoTrials, "no trials recorded");
  return static_cast<double>(successes) / static_cast<double>(successes + failures);
}

BanditState update(const BanditState& state, int arm, double r) {
  check_arm(arm);
  BanditState next = state;
  next.q[arm] = state.q[arm] + state.gamma * (r - state.q[arm]);
  return next;
}

BanditState record_trial(const BanditState& state, int arm, bool success) {
  check_arm(arm);
  BanditState next = state;
  (success ? next.alpha : next.beta)[arm] += 1;
  if (next.alpha[arm] + next.beta[arm] < next.trials_per_update) return next;

  next = update(next, arm, reward(next.alpha[arm], next.beta[arm]));
  next.alpha[arm] = 0;
  next.beta[arm] = 0;
  return next;
}

int greedy_arm(const BanditState& state) {
  int best = 0;
  for (int i = 1; i < kNumArms; ++i) {
    if (state.q[i] > state.q[best]) best = i;
  }
  return best;
}

int select(const BanditState& state, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < state.epsilon) {
    std::uniform_int_distribution<int> any(0, kNumArms - 1);
    return any(rng);
  }
  return greedy_arm(state);
}

}  // namespace gromp
