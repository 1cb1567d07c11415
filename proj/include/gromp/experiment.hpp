#pragma once

// Interactive GrOMP-vs-baseline protocol: demonstrations arrive in stages,
// each stage rebuilds the policy and refits the manifold, and every trial
// is run once without projection and once with the bandit-selected one.

#include "gromp/bandit.hpp"
#include "gromp/sim.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gromp {

enum class Arm { Baseline, Gromp };

const char* to_string(Arm arm);

struct ExperimentConfig {
  std::string task = "peg";
  TaskOverrides overrides;
  std::vector<int> stages{10, 20, 40, 60, 80, 100};
  int trials_per_stage = 10;
  int replications = 4;
  double gamma = kDefaultStepSize;
  double epsilon = kDefaultExploration;
  int trials_per_update = 1;
  double demo_noise = 5e-4;
  PolicyConfig policy;
  RolloutOptions rollout;
  std::uint64_t seed = 1;
  std::string output_dir = "results";
  int jobs = 1;
};

/// Throws InvalidConfig.
void validate(const ExperimentConfig& config);

struct ResultRow {
  int replication = 0;
  int stage_demos = 0;
  int trial = 0;
  Arm arm = Arm::Baseline;
  int projection_dim = -1;  // -1 for the baseline arm
  bool success = false;
  std::array<double, kNumArms> q{};
  std::uint64_t seed = 0;
};

using ResultsTable = std::vector<ResultRow>;

/// Rows sorted by (replication, stage, trial, arm) regardless of `jobs`.
ResultsTable run_experiment(const ExperimentConfig& config);

/// Seed of one trial; its role streams are derived from it.
std::uint64_t trial_seed(std::uint64_t master, int replication, int stage_demos, int trial);

enum class StreamRole : std::uint64_t { Demonstrations = 1, Shuffle, Start, Rollout, Bandit };

std::uint64_t role_seed(std::uint64_t seed, StreamRole role);

}  // namespace gromp
