// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "gromp/bandit.hpp"
#include "gromp/experiment.hpp"
#include "gromp/io.hpp"
#include "gromp/log.hpp"
#include "gromp/projector.hpp"
#include "gromp/sim.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace {

using namespace gromp;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      out_.pass = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }
  void note(const std::string& s) {
    if (!notes_.empty()) notes_ += ", ";
    notes_ += s;
  }
  Outcome finish() {
    out_.detail = out_.pass ? notes_ : failures_ + (notes_.empty() ? "" : " [" + notes_ + "]");
    return out_;
  }

 private:
  Outcome out_;
  std::string failures_;
  std::string notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome lie_group_suite() {
  Checker c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  double roundtrip = 0, assoc = 0, inv = 0, equi = 0;
  for (int n = 0; n < 1000; ++n) {
    const Twist xi = testing::random_twist(rng, 3.0);
    const Pose a = exp_se3(xi);
    roundtrip = std::max(roundtrip, max_abs_difference(exp_se3(log_se3(a)), a));
  }
  for (int n = 0; n < 1000; ++n) {
    const Pose a = testing::random_pose(rng), b = testing::random_pose(rng), d = testing::random_pose(rng);
    assoc = std::max(assoc, max_abs_difference(compose(compose(a, b), d), compose(a, compose(b, d))));
    inv = std::max(inv, max_abs_difference(compose(a, inverse(a)), Pose::identity()));
  }
  for (int n = 0; n < 50; ++n) {
    std::vector<Pose> poses, moved;
    for (int k = 0; k < 20; ++k) poses.push_back(testing::random_pose(rng, 0.7, 0.5));
    const Pose g = testing::random_pose(rng);
    for (const auto& p : poses) moved.push_back(compose(g, p));
    equi = std::max(equi, max_abs_difference(geodesic_mean(moved), compose(g, geodesic_mean(poses))));
  }
  const double secs = seconds_since(t0);
  c.require(roundtrip < 1e-9, "roundtrip error " + fmt("%.3g", roundtrip));
  c.require(assoc < 1e-9, "associativity error " + fmt("%.3g", assoc));
  c.require(inv < 1e-9, "inverse error " + fmt("%.3g", inv));
  c.require(equi < 1e-8, "equivariance error " + fmt("%.3g", equi));
  c.require(secs < 5.0, "runtime " + fmt("%.2f s", secs));
  c.note("roundtrip " + fmt("%.2g", roundtrip));
  c.note("axioms " + fmt("%.2g", std::max(assoc, inv)));
  c.note("equivariance " + fmt("%.2g", equi));
  c.note(fmt("%.2f s", secs));
  return c.finish();
}

Outcome loss_endpoints() {
  Checker c;
  std::mt19937_64 rng(2);
  std::vector<std::vector<Pose>> sets;
  for (int n = 0; n < 5; ++n) {
    const Pose centre = testing::random_pose(rng);
    std::vector<Pose> poses;
    for (int k = 0; k < 60; ++k) poses.push_back(compose(centre, testing::random_pose(rng, 0.5, 0.1)));
    sets.push_back(poses);
  }
  for (const char* name : {"nut", "peg", "usb", "cover"}) {
    sets.push_back(generate_demonstrations(make_task(name), 10, 5e-4, rng).object_poses());
  }
  double worst = 0;
  bool monotone = true;
  for (const auto& poses : sets) {
    const auto fit = fit_task_manifold(poses);
    worst = std::max({worst, std::abs(fit.losses[0] - 1.0), std::abs(fit.losses[6] - 1.0)});
    for (int i = 1; i <= 6; ++i) {
      monotone = monotone && fit.losses[i] - i / 6.0 <= fit.losses[i - 1] - (i - 1) / 6.0 + 1e-12;
    }
  }
  c.require(worst < 1e-9, "endpoint deviation " + fmt("%.3g", worst));
  c.require(monotone, "residual term increased with i");
  c.note(std::to_string(sets.size()) + " datasets");
  c.note("max |L-1| at endpoints " + fmt("%.2g", worst));
  return c.finish();
}

Outcome planted_recovery() {
  Checker c;
  std::mt19937_64 rng(3);
  for (int k = 1; k <= 3; ++k) {
    const Pose mean = testing::random_pose(rng, 1.0, 0.5);
    const auto dirs = testing::random_orthonormal(k, rng);
    const auto fit = fit_task_manifold(testing::planted_poses(mean, dirs, 100, 0.4, rng));
    double tail = 0;
    for (int j = k; j < 6; ++j) tail = std::max(tail, fit.manifold.singular_values(j));
    c.require(fit.prior_dim() == k, "planted " + std::to_string(k) + " recovered as " +
                                        std::to_string(fit.prior_dim()));
    c.require(tail < 1e-8, "planted " + std::to_string(k) + " trailing sigma " + fmt("%.3g", tail));
    c.note("dim " + std::to_string(k) + " -> argmin " + std::to_string(fit.prior_dim()) +
           ", tail sigma " + fmt("%.1e", tail));
  }
  return c.finish();
}

Outcome projection_identities() {
  Checker c;
  std::mt19937_64 rng(4);
  const Pose mean = testing::random_pose(rng, 1.0, 0.5);
  const auto fit =
      fit_task_manifold(testing::planted_poses(mean, testing::random_orthonormal(2, rng), 60, 0.3, rng));
  double full = 0, idem = 0, eq4 = 0, inv_grasp = 0;
  bool pinned = true;
  for (int n = 0; n < 200; ++n) {
    const Pose a_so = compose(fit.manifold.mean, testing::random_pose(rng, 0.5, 0.2));
    const Pose a_to = testing::random_pose(rng, 0.3, 0.05);
    full = std::max(full, max_abs_difference(project_object_pose(a_so, fit.manifold.with_dim(6)), a_so));
    const Pose zero = project_object_pose(a_so, fit.manifold.with_dim(0));
    pinned = pinned && zero.rotation == fit.manifold.mean.rotation &&
             zero.translation == fit.manifold.mean.translation;
    for (int i = 0; i <= 6; ++i) {
      const auto m = fit.manifold.with_dim(i);
      const Pose p = project_object_pose(a_so, m);
      idem = std::max(idem, max_abs_difference(project_object_pose(p, m), p));
      eq4 = std::max(eq4, max_abs_difference(compose(robot_pose_from_projection(p, a_to), a_to), p));
    }
    TaskManifold identity_mean;
    identity_mean.dim = 0;
    const Pose a_st = robot_pose_from_projection(project_object_pose(a_so, identity_mean), a_to);
    inv_grasp = std::max(inv_grasp, max_abs_difference(a_st, inverse(a_to)));
  }
  c.require(full < 1e-9, "dim 6 deviation " + fmt("%.3g", full));
  c.require(pinned, "dim 0 did not return the mean exactly");
  c.require(idem < 1e-9, "idempotence " + fmt("%.3g", idem));
  c.require(eq4 < 1e-9, "frame identity " + fmt("%.3g", eq4));
  c.require(inv_grasp < 1e-9, "identity-mean grasp inverse " + fmt("%.3g", inv_grasp));
  c.note("dim6 " + fmt("%.1e", full));
  c.note("idempotence " + fmt("%.1e", idem));
  c.note("compose identity " + fmt("%.1e", eq4));
  c.note("A_st=A_to^-1 " + fmt("%.1e", inv_grasp));
  return c.finish();
}

Outcome bandit_suite() {
  Checker c;
  const auto t0 = Clock::now();
  const BanditState init = init_values(LossVector{1, .8, .6, .7, .85, 1.0, 1.0});
  c.require(init.q == std::array<double, 7>{0, 1 - .8, 1 - .6, 1 - .7, 1 - .85, 0, 0}, "init values");
  c.require(reward(1, 0) == 1.0 && reward(0, 1) == 0.0 && reward(7, 3) == 7.0 / 10.0, "reward ratios");
  BanditState s;
  s.q[2] = 0.5;
  c.require(update(s, 2, 1.0).q[2] == 0.5 + 0.025 * 0.5, "step 0.5 -> 0.5125");
  c.require(update(s, 2, 0.5).q == s.q, "fixed point");
  s.gamma = 1.0;
  c.require(update(s, 2, 0.3).q[2] == 0.3, "full replacement");
  std::mt19937_64 rng(5);
  BanditState g;
  g.epsilon = 0.0;
  g.q = {0, .2, .4, .3, .15, 0, 0};
  c.require(select(g, rng) == 2, "greedy argmax");
  g.q.fill(0.25);
  c.require(select(g, rng) == 0, "tie to lowest index");

  g.epsilon = 1.0;
  std::array<int, kNumArms> counts{};
  for (int n = 0; n < 100000; ++n) ++counts[select(g, rng)];
  double chi2 = 0;
  for (int k : counts) chi2 += (k - 100000 / 7.0) * (k - 100000 / 7.0) / (100000 / 7.0);
  c.require(chi2 < 16.812, "uniform exploration chi2 " + fmt("%.2f", chi2));

  const std::array<double, kNumArms> p{0.1, 0.2, 0.9, 0.2, 0.1, 0.1, 0.1};
  int hits = 0;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 r(1000 + seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LossVector flat;
    flat.fill(1.0);
    BanditState b = init_values(flat);
    for (int pull = 0; pull < 2000; ++pull) {
      const int arm = select(b, r);
      b = record_trial(b, arm, u(r) < p[arm]);
    }
    hits += greedy_arm(b) == 2;
  }
  c.require(hits >= 18, "stationary convergence " + std::to_string(hits) + "/20");
  const BanditState d;
  c.require(d.gamma == 0.025 && d.epsilon == 0.1 && d.trials_per_update == 1, "defaults");
  const double secs = seconds_since(t0);
  c.require(secs < 10.0, "runtime " + fmt("%.2f s", secs));
  c.note("examples exact");
  c.note("planted arm " + std::to_string(hits) + "/20");
  c.note("chi2 " + fmt("%.2f", chi2));
  c.note(fmt("%.2f s", secs));
  return c.finish();
}

std::string csv_of(const ResultsTable& rows) {
  std::string out = results_header() + "\n";
  for (const auto& r : rows) out += format_result_row(r) + "\n";
  return out;
}

Outcome protocol_fidelity() {
  Checker c;
  const ExperimentConfig cfg;
  const auto dir = std::filesystem::temp_directory_path() / "gromp_acceptance";
  std::filesystem::create_directories(dir);
  const auto rows = run_experiment(cfg);
  write_results_csv(rows, dir / "a.csv");
  write_results_csv(run_experiment(cfg), dir / "b.csv");
  const bool identical = read_text_file(dir / "a.csv") == read_text_file(dir / "b.csv");
  std::filesystem::remove_all(dir);

  std::map<Arm, int> per_arm;
  std::set<int> stages, reps;
  for (const auto& r : rows) {
    ++per_arm[r.arm];
    stages.insert(r.stage_demos);
    reps.insert(r.replication);
  }
  c.require(per_arm[Arm::Baseline] == 240 && per_arm[Arm::Gromp] == 240, "trial counts");
  c.require(stages == std::set<int>{10, 20, 40, 60, 80, 100}, "stages");
  c.require(reps.size() == 4, "replications");
  c.require(cfg.trials_per_update == 1, "K");
  c.require(identical, "results CSV differs between runs");
  c.note("240 + 240 trials");
  c.note("4 replications");
  c.note("K=1");
  c.note("CSV bit-identical");
  return c.finish();
}

struct ReplicationStats {
  int base = 0, gromp = 0, n = 0;
  int greedy = -1;
};

std::vector<ReplicationStats> per_replication(const ResultsTable& rows, int reps) {
  std::vector<ReplicationStats> out(static_cast<std::size_t>(reps));
  for (const auto& r : rows) {
    auto& s = out[static_cast<std::size_t>(r.replication)];
    if (r.arm == Arm::Baseline) {
      s.base += r.success;
      ++s.n;
    } else {
      s.gromp += r.success;
      BanditState b;
      b.q = r.q;
      s.greedy = greedy_arm(b);
    }
  }
  return out;
}

Outcome beats_baseline() {
  Checker c;
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  cfg.task = "peg";
  const auto rows = run_experiment(cfg);
  int b40 = 0, n40 = 0;
  for (const auto& r : rows) {
    if (r.arm == Arm::Baseline && r.stage_demos == 40) {
      b40 += r.success;
      ++n40;
    }
  }
  const double rate40 = static_cast<double>(b40) / n40;
  int ahead = 0;
  std::string margins;
  for (const auto& s : per_replication(rows, cfg.replications)) {
    const double margin = static_cast<double>(s.gromp - s.base) / s.n;
    ahead += margin >= 0.10 - 1e-12;
    margins += (margins.empty() ? "" : "/") + fmt("%+.0f", 100 * margin);
  }
  const double secs = seconds_since(t0);
  c.require(rate40 >= 0.2 && rate40 <= 0.6, "baseline at 40 demos " + fmt("%.3f", rate40));
  c.require(ahead >= 3, std::to_string(ahead) + "/4 replications ahead by 10 points");
  c.require(secs < 600.0, "runtime " + fmt("%.1f s", secs));
  c.note("action noise " + fmt("%g", cfg.policy.action_noise_sigma));
  c.note("baseline@40 " + fmt("%.3f", rate40));
  c.note("margins " + margins + " pp");
  c.note(std::to_string(ahead) + "/4 ahead");
  c.note(fmt("%.1f s", secs));
  return c.finish();
}

Outcome dimension_identification() {
  Checker c;
  ExperimentConfig cfg;
  cfg.task = "usb";
  const auto stats = per_replication(run_experiment(cfg), cfg.replications);
  std::string greedy;
  bool all = true;
  for (const auto& s : stats) {
    greedy += std::to_string(s.greedy);
    all = all && s.greedy == 2;
  }
  c.require(all, "final argmax Q per replication " + greedy);
  c.note("final argmax Q per replication " + greedy);
  return c.finish();
}

}  // namespace

int main() {
  gromp::set_warning_sink({});
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Lie-group suite", lie_group_suite},
      {"Projection-loss endpoints", loss_endpoints},
      {"Planted-dimension recovery", planted_recovery},
      {"Projection identities", projection_identities},
      {"Bandit", bandit_suite},
      {"Protocol fidelity", protocol_fidelity},
      {"Projection beats baseline on peg", beats_baseline},
      {"Bandit dimension identification on usb", dimension_identification},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %zu: %s - %s (%s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first,
                o.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
