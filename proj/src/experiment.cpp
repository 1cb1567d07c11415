#include "gromp/experiment.hpp"

#include "gromp/error.hpp"
#include "gromp/log.hpp"
#include "gromp/rng.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>
#include <tuple>

namespace gromp {

namespace {

struct ReplicationContext {
  const ExperimentConfig& config;
  const TaskSpec& task;
  const DemonstrationDataset& pool;
};

DemonstrationDataset subset(const DemonstrationDataset& pool, const std::vector<std::size_t>& order,
                            int count) {
  DemonstrationDataset out;
  out.episodes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.episodes.push_back(pool.episodes[order[static_cast<std::size_t>(i)]]);
  return out;
}

ResultsTable run_replication(const ReplicationContext& ctx, int replication) {
  const ExperimentConfig& cfg = ctx.config;
  ResultsTable rows;

  std::vector<std::size_t> order(ctx.pool.episodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto shuffle_rng = make_stream(role_seed(
      derive_seed(cfg.seed, {static_cast<std::uint64_t>(replication)}), StreamRole::Shuffle));
  std::shuffle(order.begin(), order.end(), shuffle_rng);

  BanditState bandit;
  std::optional<int> current_arm;

  for (std::size_t s = 0; s < cfg.stages.size(); ++s) {
    const int demos = cfg.stages[s];
    const DemonstrationDataset data = subset(ctx.pool, order, demos);
    const SurrogatePolicy policy = SurrogatePolicy::build(data, cfg.policy);
    const ManifoldFit fit = fit_task_manifold(data);
    if (s == 0) {
      bandit = init_values(fit.losses, cfg.gamma, cfg.epsilon, cfg.trials_per_update);
    }

    for (int t = 0; t < cfg.trials_per_stage; ++t) {
      const std::uint64_t seed = trial_seed(cfg.seed, replication, demos, t);
      auto start_rng = make_stream(role_seed(seed, StreamRole::Start));
      const InitialCondition start = sample_initial_condition(ctx.task, start_rng);

      ResultRow base{replication, demos, t, Arm::Baseline, -1, false, bandit.q, seed};
      try {
        auto rng = make_stream(role_seed(seed, StreamRole::Rollout));
        base.success = rollout(ctx.task, policy, nullptr, start, cfg.rollout, rng).success;
      } catch (const Error& e) {
        warn("baseline trial failed: " + std::string(e.what()));
      }
      rows.push_back(base);

      if (!current_arm) {
        auto bandit_rng = make_stream(role_seed(seed, StreamRole::Bandit));
        current_arm = select(bandit, bandit_rng);
      }
      const int arm = *current_arm;
      bool success = false;
      try {
        const TaskManifold manifold = fit.manifold.with_dim(arm);
        auto rng = make_stream(role_seed(seed, StreamRole::Rollout));
        success = rollout(ctx.task, policy, &manifold, start, cfg.rollout, rng).success;
      } catch (const Error& e) {
        warn("projected trial failed: " + std::string(e.what()));
      }
      bandit = record_trial(bandit, arm, success);
      if (bandit.alpha[arm] + bandit.beta[arm] == 0) current_arm.reset();
      rows.push_back(ResultRow{replication, demos, t, Arm::Gromp, arm, success, bandit.q, seed});
    }
  }
  return rows;
}

}  // namespace

const char* to_string(Arm arm) { return arm == Arm::Baseline ? "baseline" : "gromp"; }

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (c.stages.empty()) fail("at least one demonstration stage is required");
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    if (c.stages[i] < 1) fail("stage demonstration counts must be at least 1");
    if (i > 0 && c.stages[i] <= c.stages[i - 1]) fail("stages must be strictly increasing");
  }
  if (c.trials_per_stage < 1) fail("trials_per_stage must be at least 1");
  if (c.replications < 1) fail("replications must be at least 1");
  if (c.trials_per_update < 1) fail("trials_per_update must be at least 1");
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) fail("gamma must lie in (0, 1]");
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) fail("epsilon must lie in [0, 1]");
  if (c.demo_noise < 0.0) fail("demo_noise must be non-negative");
  if (c.policy.neighbors < 1) fail("neighbors must be at least 1");
  if (c.policy.action_noise_sigma < 0.0 || c.policy.rotation_noise_ratio < 0.0) {
    fail("policy noise must be non-negative");
  }
  if (c.rollout.obs_sigma < 0.0) fail("obs_sigma must be non-negative");
  if (c.rollout.execute_steps < 1 || c.rollout.execute_steps > c.policy.action_horizon) {
    fail("execute_steps must lie in 1..action horizon");
  }
  if (c.jobs < 1) fail("jobs must be at least 1");
}

std::uint64_t trial_seed(std::uint64_t master, int replication, int stage_demos, int trial) {
  return derive_seed(master, {static_cast<std::uint64_t>(replication),
                              static_cast<std::uint64_t>(stage_demos),
                              static_cast<std::uint64_t>(trial)});
}

std::uint64_t role_seed(std::uint64_t seed, StreamRole role) {
  return derive_seed(seed, {static_cast<std::uint64_t>(role)});
}

ResultsTable run_experiment(const ExperimentConfig& config) {
  validate(config);
  TaskSpec task;
  try {
    task = make_task(config.task, config.overrides);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }

  auto demo_rng = make_stream(role_seed(config.seed, StreamRole::Demonstrations));
  const DemonstrationDataset pool =
      generate_demonstrations(task, config.stages.back(), config.demo_noise, demo_rng);
  const ReplicationContext ctx{config, task, pool};

  std::vector<ResultsTable> per_replication(static_cast<std::size_t>(config.replications));
  const int workers = std::min(config.jobs, config.replications);
  if (workers <= 1) {
    for (int r = 0; r < config.replications; ++r) {
      per_replication[static_cast<std::size_t>(r)] = run_replication(ctx, r);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (int r = next++; r < config.replications; r = next++) {
            per_replication[static_cast<std::size_t>(r)] = run_replication(ctx, r);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  ResultsTable rows;
  for (auto& part : per_replication) rows.insert(rows.end(), part.begin(), part.end());
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tuple(a.replication, a.stage_demos, a.trial, static_cast<int>(a.arm)) <
           std::tuple(b.replication, b.stage_demos, b.trial, static_cast<int>(b.arm));
  });
  return rows;
}

}  // namespace gromp
