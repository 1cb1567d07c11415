// Noise calibration sweep: runs the full protocol for a range of policy
// noise levels and prints baseline/projected success rates.

#include "gromp/experiment.hpp"
#include "gromp/log.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"Sweep the policy action noise and report success rates"};
  std::string task = "peg";
  std::vector<double> noises{2e-4, 3e-4, 4e-4, 5e-4, 6e-4};
  std::uint64_t seed = 1;
  int replications = 4;
  app.add_option("--task", task, "Task preset");
  app.add_option("--noise", noises, "Action noise levels (meters)");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--replications", replications, "Replications per noise level");
  CLI11_PARSE(app, argc, argv);

  gromp::set_warning_sink({});
  std::printf("noise,baseline_at_40,baseline_pooled,gromp_pooled,reps_gromp_ahead_10pp,final_greedy\n");
  for (double noise : noises) {
    gromp::ExperimentConfig config;
    config.task = task;
    config.seed = seed;
    config.replications = replications;
    config.policy.action_noise_sigma = noise;
    const auto rows = gromp::run_experiment(config);

    int base40 = 0, n40 = 0;
    std::vector<int> base(replications), grmp(replications), nb(replications), ng(replications);
    std::vector<int> greedy(replications, -1);
    for (const auto& r : rows) {
      if (r.arm == gromp::Arm::Baseline) {
        base[r.replication] += r.success;
        nb[r.replication] += 1;
        if (r.stage_demos == 40) {
          base40 += r.success;
          ++n40;
        }
      } else {
        grmp[r.replication] += r.success;
        ng[r.replication] += 1;
        int best = 0;
        for (int i = 1; i < gromp::kNumArms; ++i)
          if (r.q[i] > r.q[best]) best = i;
        greedy[r.replication] = best;
      }
    }
    int ahead = 0, tb = 0, tg = 0, tn = 0;
    std::string greedy_list;
    for (int k = 0; k < replications; ++k) {
      const double gb = static_cast<double>(base[k]) / nb[k];
      const double gg = static_cast<double>(grmp[k]) / ng[k];
      ahead += gg - gb >= 0.10 ? 1 : 0;
      tb += base[k];
      tg += grmp[k];
      tn += nb[k];
      greedy_list += std::to_string(greedy[k]);
    }
    std::printf("%g,%.3f,%.3f,%.3f,%d,%s\n", noise, static_cast<double>(base40) / n40,
                static_cast<double>(tb) / tn, static_cast<double>(tg) / tn, ahead, greedy_list.c_str());
  }
  return 0;
}
