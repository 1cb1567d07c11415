#include "gromp/error.hpp"
#include "gromp/io.hpp"
#include "gromp/log.hpp"
#include "gromp/sim.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gromp {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    previous_ = set_warning_sink({});
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("gromp_io_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    fs::remove_all(dir_);
    set_warning_sink(previous_);
  }
  fs::path dir_;
  WarningSink previous_;
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

bool bit_identical(const Pose& a, const Pose& b) {
  return std::memcmp(a.rotation.data(), b.rotation.data(), 9 * sizeof(double)) == 0 &&
         std::memcmp(a.translation.data(), b.translation.data(), 3 * sizeof(double)) == 0;
}

DemonstrationDataset sample_dataset(int episodes) {
  std::mt19937_64 rng(3);
  return generate_demonstrations(make_task("nut"), episodes, 5e-4, rng);
}

TEST(FormatDouble, SeventeenDigitsRoundtrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int n = 0; n < 1000; ++n) {
    const double x = u(rng);
    const std::string s = format_double(x);
    EXPECT_EQ(std::stod(s), x);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST_F(TempDir, DatasetRoundtripIsBitExact) {
  const auto data = sample_dataset(10);
  save_dataset(data, dir_ / "d.txt");
  const auto back = load_dataset(dir_ / "d.txt");
  ASSERT_EQ(back.episodes.size(), data.episodes.size());
  for (std::size_t e = 0; e < data.episodes.size(); ++e) {
    ASSERT_EQ(back.episodes[e].records.size(), data.episodes[e].records.size());
    EXPECT_EQ(back.episodes[e].id, data.episodes[e].id);
    for (std::size_t t = 0; t < data.episodes[e].records.size(); ++t) {
      const auto& a = data.episodes[e].records[t];
      const auto& b = back.episodes[e].records[t];
      EXPECT_EQ(a.step, b.step);
      EXPECT_TRUE(bit_identical(a.a_st, b.a_st));
      EXPECT_TRUE(bit_identical(a.a_to, b.a_to));
      EXPECT_TRUE(bit_identical(a.a_so, b.a_so));
    }
  }
  EXPECT_EQ(format_dataset(back), format_dataset(data));
}

TEST(Dataset, ReflectedRotationIsRejectedWithLine) {
  std::string text = format_dataset(sample_dataset(1));
  std::istringstream in(text);
  std::string out, line;
  int n = 0, target_line = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.rfind("3 ", 0) == 0) {
      // Negate the first row of a_st: det becomes -1.
      std::istringstream tok(line);
      std::vector<std::string> t;
      for (std::string s; tok >> s;) t.push_back(s);
      for (int k : {1, 2, 3, 4}) t[k] = format_double(-std::stod(t[k]));
      line.clear();
      for (const auto& s : t) line += (line.empty() ? "" : " ") + s;
      target_line = n;
    }
    out += line + "\n";
  }
  try {
    (void)parse_dataset(out);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseFailure);
    EXPECT_EQ(e.index(), std::optional<std::size_t>(target_line));
    EXPECT_NE(std::string(e.what()).find("record 3"), std::string::npos) << e.what();
  }
}

TEST_F(TempDir, EmptyAndMissingFiles) {
  std::ofstream(dir_ / "empty.txt").close();
  EXPECT_EQ(code_of([&] { (void)load_dataset(dir_ / "empty.txt"); }), ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([&] { (void)load_dataset(dir_ / "missing.txt"); }), ErrorCode::IoFailure);
}

TEST(Dataset, StructuralErrors) {
  EXPECT_EQ(code_of([] { (void)parse_dataset("episode 0 2\n0 1 0 0 0 0 1 0 0 0 0 1 0 1 0 0 0 0 1 0 0 0 0 1 0\n"); }),
            ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([] { (void)parse_dataset("episode 0 1\n1 1 0 0 0 0 1 0 0 0 0 1 0 1 0 0 0 0 1 0 0 0 0 1 0\n"); }),
            ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([] { (void)parse_dataset("episode 0 1\n0 1 0 0 0 0 1 0 0 0 0 1 0 1 0 0 0 0 1 0 0 0 0 1 x\n"); }),
            ErrorCode::ParseFailure);
  EXPECT_NO_THROW((void)parse_dataset(
      "# comment\nepisode 0 1\n0 1 0 0 0 0 1 0 0 0 0 1 0 1 0 0 0 0 1 0 0 0 0 1 0\n"));
}

TEST_F(TempDir, InconsistentRecordIsNotSaved) {
  auto data = sample_dataset(1);
  data.episodes[0].records[5].a_so.translation.x() += 1e-6;
  EXPECT_EQ(code_of([&] { save_dataset(data, dir_ / "bad.txt"); }), ErrorCode::ConsistencyFailure);
}

TEST_F(TempDir, ManifoldRoundtrip) {
  const auto fit = fit_task_manifold(sample_dataset(5));
  const TaskManifold m = fit.manifold.with_dim(2);
  save_manifold(m, dir_ / "m.txt", fit.losses);
  const ManifoldFile back = load_manifold_file(dir_ / "m.txt");
  EXPECT_TRUE(bit_identical(back.manifold.mean, m.mean));
  EXPECT_EQ(back.manifold.basis, m.basis);
  EXPECT_EQ(back.manifold.singular_values, m.singular_values);
  EXPECT_EQ(back.manifold.scales.omega, m.scales.omega);
  EXPECT_EQ(back.manifold.scales.v, m.scales.v);
  EXPECT_EQ(back.manifold.dim, m.dim);
  ASSERT_TRUE(back.losses.has_value());
  EXPECT_EQ(*back.losses, fit.losses);

  const auto unset = parse_manifold(format_manifold(fit.manifold));
  EXPECT_FALSE(unset.manifold.dim.has_value());
  EXPECT_FALSE(unset.losses.has_value());
}

std::string replace_line(const std::string& text, const std::string& key, const std::string& line) {
  std::istringstream in(text);
  std::string out, l;
  while (std::getline(in, l)) out += (l.rfind(key + " ", 0) == 0 ? line : l) + "\n";
  return out;
}

TEST(Manifold, NonOrthonormalBasisRejected) {
  const std::string text = format_manifold(TaskManifold{}.with_dim(3));
  std::string basis = "basis";
  for (int k = 0; k < 36; ++k) basis += (k % 7 == 0) ? " 1" : " 0";
  EXPECT_NO_THROW((void)parse_manifold(replace_line(text, "basis", basis)));
  basis = "basis 1.01";
  for (int k = 1; k < 36; ++k) basis += (k % 7 == 0) ? " 1" : " 0";
  EXPECT_EQ(code_of([&] { (void)parse_manifold(replace_line(text, "basis", basis)); }),
            ErrorCode::InvalidBasis);
}

TEST(Manifold, DimOutOfRangeIsParseFailure) {
  const std::string text = format_manifold(TaskManifold{}.with_dim(3));
  for (const char* bad : {"dim 7", "dim -1", "dim two"}) {
    EXPECT_EQ(code_of([&] { (void)parse_manifold(replace_line(text, "dim", bad)); }),
              ErrorCode::ParseFailure)
        << bad;
  }
}

TEST(Manifold, MissingKeyIsParseFailure) {
  EXPECT_EQ(code_of([] { (void)parse_manifold("dim 2\n"); }), ErrorCode::ParseFailure);
}

ResultRow sample_row() {
  ResultRow r;
  r.replication = 2;
  r.stage_demos = 40;
  r.trial = 7;
  r.arm = Arm::Gromp;
  r.projection_dim = 2;
  r.success = true;
  r.q = {0.1, 1.0 / 3.0, 0.6751234567890123, -0.25, 0, 1e-17, 0.5};
  r.seed = 18446744073709551615ULL;
  return r;
}

TEST(Results, HeaderSchema) {
  const std::string h = results_header();
  EXPECT_EQ(h, "replication,stage_demos,trial,arm,projection_dim,success,q0,q1,q2,q3,q4,q5,q6,seed");
  EXPECT_EQ(std::count(h.begin(), h.end(), ',') + 1, 14);
}

TEST(Results, RowFormatting) {
  ResultRow r = sample_row();
  const std::string line = format_result_row(r);
  EXPECT_EQ(line.substr(0, 20), "2,40,7,gromp,2,1,0.1");
  EXPECT_NE(line.find(",0.33333333333333331,"), std::string::npos);
  EXPECT_NE(line.find(",18446744073709551615"), std::string::npos);
  r.success = false;
  r.arm = Arm::Baseline;
  r.projection_dim = -1;
  EXPECT_EQ(format_result_row(r).substr(0, 20), "2,40,7,baseline,-1,0");
}

TEST(Results, RowRoundtrip) {
  const ResultRow r = sample_row();
  const ResultRow back = parse_result_row(format_result_row(r));
  EXPECT_EQ(back.replication, r.replication);
  EXPECT_EQ(back.stage_demos, r.stage_demos);
  EXPECT_EQ(back.trial, r.trial);
  EXPECT_EQ(back.arm, r.arm);
  EXPECT_EQ(back.projection_dim, r.projection_dim);
  EXPECT_EQ(back.success, r.success);
  EXPECT_EQ(back.q, r.q);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(code_of([] { (void)parse_result_row("1,2,3"); }), ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([] { (void)parse_result_row("0,10,0,robot,-1,0,0,0,0,0,0,0,0,1"); }),
            ErrorCode::ParseFailure);
  EXPECT_EQ(code_of([] { (void)parse_result_row("0,10,0,gromp,2,2,0,0,0,0,0,0,0,1"); }),
            ErrorCode::ParseFailure);
}

TEST_F(TempDir, AppendWritesHeaderOnce) {
  const fs::path csv = dir_ / "r.csv";
  append_result_row(sample_row(), csv);
  append_result_row(sample_row(), csv);
  const std::string text = read_text_file(csv);
  EXPECT_EQ(text.rfind(results_header() + "\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(read_results_csv(csv).size(), 2u);
}

TEST_F(TempDir, WriteAndReadResults) {
  ResultsTable rows(5, sample_row());
  for (int k = 0; k < 5; ++k) rows[k].trial = k;
  write_results_csv(rows, dir_ / "all.csv");
  const auto back = read_results_csv(dir_ / "all.csv");
  ASSERT_EQ(back.size(), 5u);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(back[k].trial, k);
  EXPECT_FALSE(fs::exists(dir_ / "all.csv.tmp"));

  std::ofstream(dir_ / "empty.csv").close();
  EXPECT_EQ(code_of([&] { (void)read_results_csv(dir_ / "empty.csv"); }), ErrorCode::ParseFailure);
}

TEST(Config, RoundtripAndOverrides) {
  ExperimentConfig c;
  c.task = "usb";
  c.stages = {3, 7, 9};
  c.gamma = 0.05;
  c.seed = 99;
  c.policy.action_noise_sigma = 3.3e-4;
  c.overrides.slip_gain = 0.1;
  c.overrides.horizon = 32;
  const ExperimentConfig back = parse_config(format_config(c));
  EXPECT_EQ(back.task, "usb");
  EXPECT_EQ(back.stages, c.stages);
  EXPECT_EQ(back.gamma, 0.05);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.policy.action_noise_sigma, 3.3e-4);
  EXPECT_EQ(back.overrides.slip_gain, std::optional<double>(0.1));
  EXPECT_EQ(back.overrides.horizon, std::optional<int>(32));
  EXPECT_EQ(format_config(back), format_config(c));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(code_of([] { (void)parse_config("colour = blue\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { (void)parse_config("gamma = fast\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { (void)parse_config("stages = 10,5\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { (void)parse_config("just words\n"); }), ErrorCode::InvalidConfig);
  const ExperimentConfig c = parse_config("# comment\n\ntrials_per_stage = 3\n");
  EXPECT_EQ(c.trials_per_stage, 3);
}

}  // namespace
}  // namespace gromp
