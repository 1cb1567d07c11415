// Command-line front end: demo-gen, fit, rollout, experiment, report.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include "gromp/error.hpp"
#include "gromp/experiment.hpp"
#include "gromp/io.hpp"
#include "gromp/log.hpp"
#include "gromp/report.hpp"
#include "gromp/rng.hpp"
#include "gromp/sim.hpp"

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_out_dir(const std::string& fallback) {
  if (const char* env = std::getenv("GROMP_OUT_DIR"); env && *env) return env;
  return fallback;
}

gromp::TaskSpec task_or_usage(const std::string& name, const gromp::TaskOverrides& overrides) {
  try {
    return gromp::make_task(name, overrides);
  } catch (const gromp::Error& e) {
    if (e.code() == gromp::ErrorCode::UnknownPreset) throw UsageError(e.what());
    throw;
  }
}

struct DemoGenArgs {
  std::string task = "peg";
  int episodes = 10;
  double noise = 5e-4;
  std::uint64_t seed = 1;
  std::string out;
  gromp::TaskOverrides overrides;
};

int run_demo_gen(const DemoGenArgs& a) {
  if (a.episodes < 1) throw UsageError("--episodes must be at least 1");
  if (a.noise < 0.0) throw UsageError("--noise must be non-negative");
  const gromp::TaskSpec task = task_or_usage(a.task, a.overrides);
  auto rng = gromp::make_stream(gromp::role_seed(a.seed, gromp::StreamRole::Demonstrations));
  const auto data = gromp::generate_demonstrations(task, a.episodes, a.noise, rng);
  gromp::save_dataset(data, a.out);
  std::printf("wrote %d episodes (%zu records) to %s\n", a.episodes, data.record_count(),
              a.out.c_str());
  return kExitOk;
}

struct FitArgs {
  std::string data;
  std::string out;
};

int run_fit(const FitArgs& a) {
  const auto data = gromp::load_dataset(a.data);
  const gromp::ManifoldFit fit = gromp::fit_task_manifold(data);
  for (int i = 0; i < gromp::kNumProjections; ++i) {
    std::printf("%d %.15f\n", i, fit.losses[static_cast<std::size_t>(i)]);
  }
  gromp::save_manifold(fit.manifold.with_dim(fit.prior_dim()), a.out, fit.losses);
  return kExitOk;
}

struct RolloutArgs {
  std::string task = "peg";
  std::string data;
  std::string manifold;
  std::optional<int> dim;
  std::uint64_t seed = 1;
  bool baseline = false;
  int demo_episodes = 40;
  std::optional<int> replay_episode;
  double demo_noise = 5e-4;
  gromp::PolicyConfig policy;
  gromp::RolloutOptions options;
  gromp::TaskOverrides overrides;
};

int run_rollout(const RolloutArgs& a) {
  const gromp::TaskSpec task = task_or_usage(a.task, a.overrides);

  gromp::DemonstrationDataset data;
  if (!a.data.empty()) {
    data = gromp::load_dataset(a.data);
  } else {
    auto rng = gromp::make_stream(gromp::role_seed(a.seed, gromp::StreamRole::Demonstrations));
    data = gromp::generate_demonstrations(task, a.demo_episodes, a.demo_noise, rng);
  }
  const auto policy = gromp::SurrogatePolicy::build(data, a.policy);

  std::optional<gromp::TaskManifold> manifold;
  if (!a.baseline) {
    gromp::TaskManifold m;
    if (!a.manifold.empty()) {
      m = gromp::load_manifold(a.manifold);
    } else {
      const auto fit = gromp::fit_task_manifold(data);
      m = fit.manifold.with_dim(fit.prior_dim());
    }
    if (a.dim) m = m.with_dim(*a.dim);
    if (!m.dim) throw UsageError("manifold has no dimensionality; pass --dim");
    manifold = m;
  }

  gromp::InitialCondition start;
  if (a.replay_episode) {
    if (*a.replay_episode >= static_cast<int>(data.episodes.size())) {
      throw UsageError("--replay-episode exceeds the number of episodes");
    }
    const auto& first = data.episodes[static_cast<std::size_t>(*a.replay_episode)].records.front();
    start = {first.a_so, first.a_to};
  } else {
    auto start_rng = gromp::make_stream(gromp::role_seed(a.seed, gromp::StreamRole::Start));
    start = gromp::sample_initial_condition(task, start_rng);
  }
  auto rng = gromp::make_stream(gromp::role_seed(a.seed, gromp::StreamRole::Rollout));
  const auto record =
      gromp::rollout(task, policy, manifold ? &*manifold : nullptr, start, a.options, rng);

  std::printf("success %d\n", record.success ? 1 : 0);
  std::printf("steps %zu\n", record.steps.size());
  std::printf("prediction_steps %d\n", record.prediction_steps);
  if (manifold) {
    std::printf("projection_dim %d\n", *manifold->dim);
  } else {
    std::printf("projection_dim none\n");
  }
  std::printf("projection_fallbacks %d\n", record.projection_fallbacks);
  std::printf("hash %016" PRIx64 "\n", gromp::trajectory_hash(record));
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out_dir;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  gromp::ExperimentConfig config;
  if (!a.config.empty()) config = gromp::load_config(a.config);
  if (a.jobs) config.jobs = *a.jobs;
  if (a.seed) config.seed = *a.seed;
  const fs::path out_dir = a.out_dir.empty() ? default_out_dir(config.output_dir) : a.out_dir;
  config.output_dir = out_dir.string();

  const auto rows = gromp::run_experiment(config);
  fs::create_directories(out_dir);
  gromp::write_results_csv(rows, out_dir / "results.csv");
  gromp::write_text_file_atomic(out_dir / "config.txt", gromp::format_config(config));
  std::printf("wrote %zu rows to %s\n", rows.size(), (out_dir / "results.csv").string().c_str());
  return kExitOk;
}

struct ReportArgs {
  std::string csv;
  std::string out_dir;
};

int run_report(const ReportArgs& a) {
  const auto rows = gromp::read_results_csv(a.csv);
  const fs::path out_dir = a.out_dir.empty() ? default_out_dir("report") : a.out_dir;
  gromp::write_report(rows, out_dir);
  for (const auto& s : gromp::summarize_by_stage(rows)) {
    std::printf("stage %3d %-8s mean %.3f std %.3f\n", s.stage_demos, gromp::to_string(s.arm),
                s.mean, s.std);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grasped object manifold projection toolkit"};
  app.require_subcommand(1, 1);

  DemoGenArgs demo;
  auto* demo_cmd = app.add_subcommand("demo-gen", "Generate expert demonstrations");
  demo_cmd->add_option("--task", demo.task, "Task preset (nut, peg, usb, cover)");
  demo_cmd->add_option("--episodes", demo.episodes, "Number of episodes");
  demo_cmd->add_option("--noise", demo.noise, "On-manifold demonstration noise");
  demo_cmd->add_option("--seed", demo.seed, "Master seed");
  demo_cmd->add_option("--out", demo.out, "Output dataset file")->required();
  double demo_slip_gain = -1.0, demo_slip_noise = -1.0;
  demo_cmd->add_option("--slip-gain", demo_slip_gain, "Slip gain override");
  demo_cmd->add_option("--slip-noise", demo_slip_noise, "Slip noise override");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a task manifold and print its losses");
  fit_cmd->add_option("--data", fit.data, "Dataset file")->required();
  fit_cmd->add_option("--out", fit.out, "Output manifold file")->required();

  RolloutArgs ro;
  int dim_flag = -1;
  double slip_gain = -1.0, slip_noise = -1.0;
  auto* ro_cmd = app.add_subcommand("rollout", "Run a single rollout");
  ro_cmd->add_option("--task", ro.task, "Task preset");
  ro_cmd->add_option("--data", ro.data, "Dataset file (generated from --seed when omitted)");
  ro_cmd->add_option("--manifold", ro.manifold, "Manifold file (fitted from the data when omitted)");
  auto* dim_opt = ro_cmd->add_option("--dim", dim_flag, "Projection dimensionality 0..6")
                      ->check(CLI::Range(0, gromp::kTangentDim));
  ro_cmd->add_option("--seed", ro.seed, "Trial seed");
  ro_cmd->add_flag("--baseline", ro.baseline, "Skip projection");
  ro_cmd->add_option("--demo-episodes", ro.demo_episodes, "Episodes generated when --data is omitted");
  ro_cmd->add_option("--demo-noise", ro.demo_noise, "Noise of generated demonstrations");
  int replay_flag = 0;
  auto* replay_opt =
      ro_cmd->add_option("--replay-episode", replay_flag, "Start from this demonstration's first record")
          ->check(CLI::NonNegativeNumber);
  ro_cmd->add_option("--action-noise", ro.policy.action_noise_sigma, "Policy action noise (m)");
  ro_cmd->add_option("--neighbors", ro.policy.neighbors, "Policy neighbour count");
  ro_cmd->add_option("--obs-noise", ro.options.obs_sigma, "In-hand observation noise");
  ro_cmd->add_option("--slip-gain", slip_gain, "Slip gain override");
  ro_cmd->add_option("--slip-noise", slip_noise, "Slip noise override");

  ExperimentArgs ex;
  int jobs_flag = 0;
  std::uint64_t seed_flag = 0;
  auto* ex_cmd = app.add_subcommand("experiment", "Run the staged baseline-vs-projection protocol");
  ex_cmd->add_option("--config", ex.config, "Config file (defaults when omitted)");
  ex_cmd->add_option("--out-dir", ex.out_dir, "Output directory (default: $GROMP_OUT_DIR)");
  auto* jobs_opt = ex_cmd->add_option("--jobs", jobs_flag, "Parallel replications")
                       ->check(CLI::PositiveNumber);
  auto* seed_opt = ex_cmd->add_option("--seed", seed_flag, "Master seed override");

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Summarize a results CSV");
  rep_cmd->add_option("--csv", rep.csv, "Results CSV")->required();
  rep_cmd->add_option("--out-dir", rep.out_dir, "Output directory (default: $GROMP_OUT_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (dim_opt->count() > 0) ro.dim = dim_flag;
  if (replay_opt->count() > 0) ro.replay_episode = replay_flag;
  if (demo_slip_gain >= 0.0) demo.overrides.slip_gain = demo_slip_gain;
  if (demo_slip_noise >= 0.0) demo.overrides.slip_noise_sigma = demo_slip_noise;
  if (slip_gain >= 0.0) ro.overrides.slip_gain = slip_gain;
  if (slip_noise >= 0.0) ro.overrides.slip_noise_sigma = slip_noise;
  if (jobs_opt->count() > 0) ex.jobs = jobs_flag;
  if (seed_opt->count() > 0) ex.seed = seed_flag;

  try {
    if (*demo_cmd) return run_demo_gen(demo);
    if (*fit_cmd) return run_fit(fit);
    if (*ro_cmd) return run_rollout(ro);
    if (*ex_cmd) return run_experiment_cmd(ex);
    if (*rep_cmd) return run_report(rep);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
