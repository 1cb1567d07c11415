#include "gromp/io.hpp"

#include "gromp/error.hpp"

#include <Eigen/LU>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <system_error>
#include <vector>

namespace gromp {

namespace fs = std::filesystem;

namespace {

constexpr double kLoadTolerance = 1e-9;

std::vector<std::string_view> split(std::string_view line, char sep = '\0') {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [sep](char c) { return sep == '\0' ? (c == ' ' || c == '\t' || c == '\r') : c == sep; };
  if (sep != '\0') {
    while (true) {
      const std::size_t j = line.find(sep, i);
      out.push_back(line.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
      if (j == std::string_view::npos) break;
      i = j + 1;
    }
    return out;
  }
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_comment_or_blank(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseFailure, "line " + std::to_string(line) + ": " + what, line);
}

double need_double(std::string_view token, std::size_t line) {
  const auto v = parse_number<double>(token);
  if (!v) parse_fail(line, "expected a number, got '" + std::string(token) + "'");
  return *v;
}

long long need_int(std::string_view token, std::size_t line) {
  const auto v = parse_number<long long>(token);
  if (!v) parse_fail(line, "expected an integer, got '" + std::string(token) + "'");
  return *v;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

void append_pose(std::string& out, const Pose& p) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out += ' ';
      out += format_double(p.rotation(r, c));
    }
    out += ' ';
    out += format_double(p.translation(r));
  }
}

Pose parse_pose(const std::vector<std::string_view>& tokens, std::size_t offset, std::size_t line) {
  Pose p;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) p.rotation(r, c) = need_double(tokens[offset + 4 * r + c], line);
    p.translation(r) = need_double(tokens[offset + 4 * r + 3], line);
  }
  return p;
}

std::string describe_invalid(const Pose& p) {
  return "rotation is not proper (orthonormality residual " +
         format_double(p.orthonormality_residual()) + ", det " +
         format_double(p.rotation.determinant()) + ")";
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "error reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "error writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot move '" + tmp.string() + "' into place: " + ec.message());
}

// ---------------------------------------------------------------- dataset

std::string format_dataset(const DemonstrationDataset& dataset) {
  std::string out = "# gromp demonstration dataset v1\n"
                    "# record: step a_st(3x4 row-major) a_to(3x4 row-major)\n";
  for (const auto& episode : dataset.episodes) {
    out += "episode " + std::to_string(episode.id) + ' ' + std::to_string(episode.records.size()) + '\n';
    for (std::size_t k = 0; k < episode.records.size(); ++k) {
      const auto& r = episode.records[k];
      if (max_abs_difference(r.a_so, compose(r.a_st, r.a_to)) > kLoadTolerance) {
        throw Error(ErrorCode::ConsistencyFailure,
                    "episode " + std::to_string(episode.id) + " record " + std::to_string(k) +
                        ": a_so differs from a_st * a_to",
                    k);
      }
      out += std::to_string(r.step);
      append_pose(out, r.a_st);
      append_pose(out, r.a_to);
      out += '\n';
    }
  }
  return out;
}

DemonstrationDataset parse_dataset(const std::string& text) {
  DemonstrationDataset dataset;
  std::size_t remaining = 0;
  std::size_t line_no = 0;
  for (const auto& raw : lines_of(text)) {
    ++line_no;
    if (is_comment_or_blank(raw)) continue;
    const auto tokens = split(raw);
    if (tokens.front() == "episode") {
      if (remaining != 0) parse_fail(line_no, "previous episode is missing records");
      if (tokens.size() != 3) parse_fail(line_no, "expected 'episode <id> <length>'");
      const long long id = need_int(tokens[1], line_no);
      const long long length = need_int(tokens[2], line_no);
      if (length < 1) parse_fail(line_no, "episode length must be positive");
      dataset.episodes.push_back(Episode{static_cast<int>(id), {}});
      dataset.episodes.back().records.reserve(static_cast<std::size_t>(length));
      remaining = static_cast<std::size_t>(length);
      continue;
    }
    if (remaining == 0) parse_fail(line_no, "record outside an episode");
    if (tokens.size() != 25) parse_fail(line_no, "expected 25 fields per record");
    Episode& episode = dataset.episodes.back();
    const std::size_t index = episode.records.size();
    const long long step = need_int(tokens[0], line_no);
    if (step != static_cast<long long>(index)) {
      parse_fail(line_no, "step " + std::to_string(step) + " out of order (expected " +
                              std::to_string(index) + ")");
    }
    const Pose a_st = parse_pose(tokens, 1, line_no);
    const Pose a_to = parse_pose(tokens, 13, line_no);
    const std::string where = "episode " + std::to_string(episode.id) + " record " + std::to_string(index);
    if (!a_st.is_valid(kLoadTolerance)) parse_fail(line_no, where + ": a_st " + describe_invalid(a_st));
    if (!a_to.is_valid(kLoadTolerance)) parse_fail(line_no, where + ": a_to " + describe_invalid(a_to));
    episode.records.push_back(PoseRecord::from_frames(static_cast<int>(step), a_st, a_to));
    --remaining;
  }
  if (remaining != 0) parse_fail(line_no, "file ends inside an episode");
  if (dataset.episodes.empty()) parse_fail(line_no, "no episodes found");
  return dataset;
}

void save_dataset(const DemonstrationDataset& dataset, const fs::path& path) {
  write_text_file_atomic(path, format_dataset(dataset));
}

DemonstrationDataset load_dataset(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_dataset(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what(), e.index());
  }
}

// --------------------------------------------------------------- manifold

std::string format_manifold(const TaskManifold& m, const std::optional<LossVector>& losses) {
  std::string out = "# gromp task manifold v1\nmean";
  append_pose(out, m.mean);
  out += "\nscales " + format_double(m.scales.omega) + ' ' + format_double(m.scales.v);
  out += "\nsingular_values";
  for (int i = 0; i < kTangentDim; ++i) out += ' ' + format_double(m.singular_values(i));
  out += "\nbasis";
  for (int r = 0; r < kTangentDim; ++r)
    for (int c = 0; c < kTangentDim; ++c) out += ' ' + format_double(m.basis(r, c));
  out += "\ndim " + (m.dim ? std::to_string(*m.dim) : std::string("none"));
  if (losses) {
    out += "\nlosses";
    for (double l : *losses) out += ' ' + format_double(l);
  }
  out += '\n';
  return out;
}

ManifoldFile parse_manifold(const std::string& text) {
  ManifoldFile file;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  auto expect = [&](const std::vector<std::string_view>& t, std::size_t n) {
    if (t.size() != n + 1) {
      parse_fail(line_no, "'" + std::string(t[0]) + "' expects " + std::to_string(n) + " values");
    }
  };
  for (const auto& raw : lines_of(text)) {
    ++line_no;
    if (is_comment_or_blank(raw)) continue;
    const auto t = split(raw);
    const std::string key(t[0]);
    if (!seen.insert(key).second) parse_fail(line_no, "duplicate key '" + key + "'");
    TaskManifold& m = file.manifold;
    if (key == "mean") {
      expect(t, 12);
      m.mean = parse_pose(t, 1, line_no);
      if (!m.mean.is_valid(kLoadTolerance)) parse_fail(line_no, "mean " + describe_invalid(m.mean));
    } else if (key == "scales") {
      expect(t, 2);
      m.scales.omega = need_double(t[1], line_no);
      m.scales.v = need_double(t[2], line_no);
      if (!(m.scales.omega > 0.0) || !(m.scales.v > 0.0)) parse_fail(line_no, "scales must be positive");
    } else if (key == "singular_values") {
      expect(t, kTangentDim);
      for (int i = 0; i < kTangentDim; ++i) m.singular_values(i) = need_double(t[1 + i], line_no);
      if (m.singular_values.minCoeff() < 0.0) parse_fail(line_no, "negative singular value");
    } else if (key == "basis") {
      expect(t, kTangentDim * kTangentDim);
      for (int r = 0; r < kTangentDim; ++r)
        for (int c = 0; c < kTangentDim; ++c) m.basis(r, c) = need_double(t[1 + r * kTangentDim + c], line_no);
    } else if (key == "dim") {
      expect(t, 1);
      if (t[1] == "none") {
        m.dim.reset();
      } else {
        const long long d = need_int(t[1], line_no);
        if (d < 0 || d > kTangentDim) parse_fail(line_no, "dim " + std::to_string(d) + " outside 0..6");
        m.dim = static_cast<int>(d);
      }
    } else if (key == "losses") {
      expect(t, kNumProjections);
      LossVector l{};
      for (int i = 0; i < kNumProjections; ++i) l[i] = need_double(t[1 + i], line_no);
      file.losses = l;
    } else {
      parse_fail(line_no, "unknown key '" + key + "'");
    }
  }
  for (const char* required : {"mean", "scales", "singular_values", "basis", "dim"}) {
    if (!seen.count(required)) parse_fail(line_no, std::string("missing '") + required + "'");
  }
  const Matrix6d& p = file.manifold.basis;
  const double residual = (p.transpose() * p - Matrix6d::Identity()).norm();
  if (!(residual <= kLoadTolerance)) {
    throw Error(ErrorCode::InvalidBasis,
                "basis is not orthonormal (residual " + format_double(residual) + ")");
  }
  return file;
}

void save_manifold(const TaskManifold& manifold, const fs::path& path,
                   const std::optional<LossVector>& losses) {
  write_text_file_atomic(path, format_manifold(manifold, losses));
}

ManifoldFile load_manifold_file(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_manifold(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what(), e.index());
  }
}

TaskManifold load_manifold(const fs::path& path) { return load_manifold_file(path).manifold; }

// ----------------------------------------------------------------- config

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::size_t line_no = 0;
  auto bad = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": " + what, line_no);
  };
  auto num = [&](std::string_view v) {
    const auto d = parse_number<double>(v);
    if (!d) bad("expected a number, got '" + std::string(v) + "'");
    return *d;
  };
  auto integer = [&](std::string_view v) {
    const auto d = parse_number<long long>(v);
    if (!d) bad("expected an integer, got '" + std::string(v) + "'");
    return static_cast<int>(*d);
  };

  for (const auto& raw : lines_of(text)) {
    ++line_no;
    if (is_comment_or_blank(raw)) continue;
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos) bad("expected 'key = value'");
    const std::string key(trim(std::string_view(raw).substr(0, eq)));
    const std::string_view value = trim(std::string_view(raw).substr(eq + 1));
    if (value.empty()) bad("missing value for '" + key + "'");

    if (key == "task") c.task = std::string(value);
    else if (key == "stages") {
      c.stages.clear();
      for (auto part : split(value, ',')) c.stages.push_back(integer(trim(part)));
    }
    else if (key == "trials_per_stage") c.trials_per_stage = integer(value);
    else if (key == "replications") c.replications = integer(value);
    else if (key == "gamma") c.gamma = num(value);
    else if (key == "epsilon") c.epsilon = num(value);
    else if (key == "trials_per_update") c.trials_per_update = integer(value);
    else if (key == "demo_noise") c.demo_noise = num(value);
    else if (key == "action_noise") c.policy.action_noise_sigma = num(value);
    else if (key == "rotation_noise_ratio") c.policy.rotation_noise_ratio = num(value);
    else if (key == "neighbors") c.policy.neighbors = integer(value);
    else if (key == "action_horizon") c.policy.action_horizon = integer(value);
    else if (key == "execute_steps") c.rollout.execute_steps = integer(value);
    else if (key == "obs_sigma") c.rollout.obs_sigma = num(value);
    else if (key == "seed") {
      const auto s = parse_number<std::uint64_t>(value);
      if (!s) bad("seed must be an unsigned integer");
      c.seed = *s;
    }
    else if (key == "output_dir") c.output_dir = std::string(value);
    else if (key == "jobs") c.jobs = integer(value);
    else if (key == "tol_translation") c.overrides.success_tol_translation = num(value);
    else if (key == "tol_rotation") c.overrides.success_tol_rotation = num(value);
    else if (key == "slip_gain") c.overrides.slip_gain = num(value);
    else if (key == "slip_noise") c.overrides.slip_noise_sigma = num(value);
    else if (key == "contact_threshold") c.overrides.contact_threshold = num(value);
    else if (key == "horizon") c.overrides.horizon = integer(value);
    else bad("unknown key '" + key + "'");
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_config(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what(), e.index());
  }
}

std::string format_config(const ExperimentConfig& c) {
  std::string stages;
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    if (i) stages += ',';
    stages += std::to_string(c.stages[i]);
  }
  std::string out = "# gromp experiment configuration\n";
  auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + '\n'; };
  kv("task", c.task);
  kv("stages", stages);
  kv("trials_per_stage", std::to_string(c.trials_per_stage));
  kv("replications", std::to_string(c.replications));
  kv("gamma", format_double(c.gamma));
  kv("epsilon", format_double(c.epsilon));
  kv("trials_per_update", std::to_string(c.trials_per_update));
  kv("demo_noise", format_double(c.demo_noise));
  kv("action_noise", format_double(c.policy.action_noise_sigma));
  kv("rotation_noise_ratio", format_double(c.policy.rotation_noise_ratio));
  kv("neighbors", std::to_string(c.policy.neighbors));
  kv("action_horizon", std::to_string(c.policy.action_horizon));
  kv("execute_steps", std::to_string(c.rollout.execute_steps));
  kv("obs_sigma", format_double(c.rollout.obs_sigma));
  kv("seed", std::to_string(c.seed));
  kv("output_dir", c.output_dir);
  kv("jobs", std::to_string(c.jobs));
  const auto& o = c.overrides;
  if (o.success_tol_translation) kv("tol_translation", format_double(*o.success_tol_translation));
  if (o.success_tol_rotation) kv("tol_rotation", format_double(*o.success_tol_rotation));
  if (o.slip_gain) kv("slip_gain", format_double(*o.slip_gain));
  if (o.slip_noise_sigma) kv("slip_noise", format_double(*o.slip_noise_sigma));
  if (o.contact_threshold) kv("contact_threshold", format_double(*o.contact_threshold));
  if (o.horizon) kv("horizon", std::to_string(*o.horizon));
  return out;
}

// ---------------------------------------------------------------- results

std::string results_header() {
  return "replication,stage_demos,trial,arm,projection_dim,success,q0,q1,q2,q3,q4,q5,q6,seed";
}

std::string format_result_row(const ResultRow& row) {
  std::string out = std::to_string(row.replication) + ',' + std::to_string(row.stage_demos) + ',' +
                    std::to_string(row.trial) + ',' + to_string(row.arm) + ',' +
                    std::to_string(row.projection_dim) + ',' + (row.success ? "1" : "0");
  for (double q : row.q) out += ',' + format_double(q);
  out += ',' + std::to_string(row.seed);
  return out;
}

ResultRow parse_result_row(const std::string& line, std::size_t line_no) {
  const auto f = split(trim(line), ',');
  if (f.size() != 14) parse_fail(line_no, "expected 14 comma-separated fields");
  ResultRow row;
  row.replication = static_cast<int>(need_int(f[0], line_no));
  row.stage_demos = static_cast<int>(need_int(f[1], line_no));
  row.trial = static_cast<int>(need_int(f[2], line_no));
  if (f[3] == "baseline") row.arm = Arm::Baseline;
  else if (f[3] == "gromp") row.arm = Arm::Gromp;
  else parse_fail(line_no, "unknown arm '" + std::string(f[3]) + "'");
  row.projection_dim = static_cast<int>(need_int(f[4], line_no));
  if (f[5] != "0" && f[5] != "1") parse_fail(line_no, "success must be 0 or 1");
  row.success = f[5] == "1";
  for (int i = 0; i < kNumArms; ++i) row.q[i] = need_double(f[6 + i], line_no);
  const auto seed = parse_number<std::uint64_t>(f[13]);
  if (!seed) parse_fail(line_no, "seed must be an unsigned integer");
  row.seed = *seed;
  return row;
}

void append_result_row(const ResultRow& row, const fs::path& path) {
  std::error_code ec;
  const bool fresh = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
  std::FILE* f = std::fopen(path.string().c_str(), "ab");
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for appending");
  std::string chunk;
  if (fresh) chunk = results_header() + '\n';
  chunk += format_result_row(row) + '\n';
  const bool ok = std::fwrite(chunk.data(), 1, chunk.size(), f) == chunk.size();
  const bool closed = std::fclose(f) == 0;
  if (!ok || !closed) throw Error(ErrorCode::IoFailure, "error appending to '" + path.string() + "'");
}

void write_results_csv(const ResultsTable& rows, const fs::path& path) {
  std::string out = results_header() + '\n';
  for (const auto& row : rows) out += format_result_row(row) + '\n';
  write_text_file_atomic(path, out);
}

ResultsTable read_results_csv(const fs::path& path) {
  const auto lines = lines_of(read_text_file(path));
  std::size_t i = 0;
  while (i < lines.size() && is_comment_or_blank(lines[i])) ++i;
  if (i == lines.size()) {
    throw Error(ErrorCode::ParseFailure, path.string() + ": empty results file");
  }
  if (trim(lines[i]) != results_header()) {
    throw Error(ErrorCode::ParseFailure, path.string() + ": unexpected header", i + 1);
  }
  ResultsTable rows;
  for (++i; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    rows.push_back(parse_result_row(lines[i], i + 1));
  }
  return rows;
}

}  // namespace gromp
