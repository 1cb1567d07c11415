#pragma once

#include "gromp/experiment.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace gromp {

struct StageSummary {
  int stage_demos = 0;
  Arm arm = Arm::Baseline;
  double mean = 0.0;  // success rate averaged over replications
  double std = 0.0;   // sample standard deviation over replications
  int replications = 0;
};

/// Per-stage success rates, ordered by stage then arm.
std::vector<StageSummary> summarize_by_stage(const ResultsTable& rows);

struct QHistoryPoint {
  int trial_index = 0;  // position in each replication's projected-arm sequence
  std::array<double, kNumArms> mean{};
  std::array<double, kNumArms> std{};
  int greedy = 0;  // argmax of the mean values
};

std::vector<QHistoryPoint> q_history(const ResultsTable& rows);

std::string success_by_stage_csv(const std::vector<StageSummary>& summary);
std::string q_history_csv(const std::vector<QHistoryPoint>& history);
std::string success_by_stage_svg(const std::vector<StageSummary>& summary);
std::string q_history_svg(const std::vector<QHistoryPoint>& history);

/// Writes success_by_stage.{csv,svg} and q_history.{csv,svg} into
/// `out_dir`. Throws EmptyInput when there are no rows.
void write_report(const ResultsTable& rows, const std::filesystem::path& out_dir);

}  // namespace gromp
