#include "gromp/report.hpp"

#include "gromp/error.hpp"
#include "gromp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

namespace gromp {

namespace fs = std::filesystem;

namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::string fixed(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

const std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Minimal line chart: axes, tick labels, one polyline per series, legend.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       double y_min, double y_max) {
  constexpr double W = 640, H = 400, L = 60, R = 150, T = 40, B = 50;
  double x_min = 0.0, x_max = 1.0;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      x_min = first ? x : std::min(x_min, x);
      x_max = first ? x : std::max(x_max, x);
      first = false;
    }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) y_max = y_min + 1.0;
  auto px = [&](double x) { return L + (x - x_min) / (x_max - x_min) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y_min) / (y_max - y_min) * (H - T - B); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
                    "font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(W / 2, 1) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + title + "</text>\n";
  svg += "<line x1=\"" + fixed(L, 1) + "\" y1=\"" + fixed(H - B, 1) + "\" x2=\"" + fixed(W - R, 1) +
         "\" y2=\"" + fixed(H - B, 1) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fixed(L, 1) + "\" y1=\"" + fixed(T, 1) + "\" x2=\"" + fixed(L, 1) +
         "\" y2=\"" + fixed(H - B, 1) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = y_min + (y_max - y_min) * i / 4.0;
    svg += "<text x=\"" + fixed(L - 6, 1) + "\" y=\"" + fixed(py(y) + 4, 1) +
           "\" text-anchor=\"end\">" + fixed(y, 2) + "</text>\n";
    const double x = x_min + (x_max - x_min) * i / 4.0;
    svg += "<text x=\"" + fixed(px(x), 1) + "\" y=\"" + fixed(H - B + 16, 1) +
           "\" text-anchor=\"middle\">" + fixed(x, 0) + "</text>\n";
  }
  svg += "<text x=\"" + fixed((L + W - R) / 2, 1) + "\" y=\"" + fixed(H - 10, 1) +
         "\" text-anchor=\"middle\">" + x_label + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fixed((T + H - B) / 2, 1) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fixed((T + H - B) / 2, 1) + ")\">" + y_label + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    std::string pts;
    for (const auto& [x, y] : series[k].points) {
      if (!pts.empty()) pts += ' ';
      pts += fixed(px(x), 2) + ',' + fixed(py(y), 2);
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(k);
    svg += "<line x1=\"" + fixed(W - R + 12, 1) + "\" y1=\"" + fixed(ly, 1) + "\" x2=\"" + fixed(W - R + 32, 1) +
           "\" y2=\"" + fixed(ly, 1) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed(W - R + 38, 1) + "\" y=\"" + fixed(ly + 4, 1) + "\">" + series[k].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

std::vector<StageSummary> summarize_by_stage(const ResultsTable& rows) {
  // (stage, arm) -> replication -> (successes, trials)
  std::map<std::pair<int, int>, std::map<int, std::pair<int, int>>> counts;
  for (const auto& r : rows) {
    auto& c = counts[{r.stage_demos, static_cast<int>(r.arm)}][r.replication];
    c.first += r.success ? 1 : 0;
    c.second += 1;
  }
  std::vector<StageSummary> out;
  for (const auto& [key, per_rep] : counts) {
    std::vector<double> rates;
    for (const auto& [rep, c] : per_rep) rates.push_back(static_cast<double>(c.first) / c.second);
    const auto [mean, sd] = mean_std(rates);
    out.push_back(StageSummary{key.first, static_cast<Arm>(key.second), mean, sd,
                               static_cast<int>(rates.size())});
  }
  return out;
}

std::vector<QHistoryPoint> q_history(const ResultsTable& rows) {
  std::map<int, std::vector<const ResultRow*>> per_rep;
  for (const auto& r : rows)
    if (r.arm == Arm::Gromp) per_rep[r.replication].push_back(&r);
  std::size_t longest = 0;
  for (auto& [rep, seq] : per_rep) {
    std::stable_sort(seq.begin(), seq.end(), [](const ResultRow* a, const ResultRow* b) {
      return std::pair(a->stage_demos, a->trial) < std::pair(b->stage_demos, b->trial);
    });
    longest = std::max(longest, seq.size());
  }
  std::vector<QHistoryPoint> out;
  for (std::size_t k = 0; k < longest; ++k) {
    QHistoryPoint p;
    p.trial_index = static_cast<int>(k);
    for (int arm = 0; arm < kNumArms; ++arm) {
      std::vector<double> values;
      for (const auto& [rep, seq] : per_rep)
        if (k < seq.size()) values.push_back(seq[k]->q[arm]);
      std::tie(p.mean[arm], p.std[arm]) = mean_std(values);
    }
    p.greedy = static_cast<int>(std::max_element(p.mean.begin(), p.mean.end()) - p.mean.begin());
    out.push_back(p);
  }
  return out;
}

std::string success_by_stage_csv(const std::vector<StageSummary>& summary) {
  std::string out = "stage,arm,mean,std\n";
  for (const auto& s : summary) {
    out += std::to_string(s.stage_demos) + ',' + to_string(s.arm) + ',' + format_double(s.mean) + ',' +
           format_double(s.std) + '\n';
  }
  return out;
}

std::string q_history_csv(const std::vector<QHistoryPoint>& history) {
  std::string out = "trial";
  for (int i = 0; i < kNumArms; ++i) out += ",q" + std::to_string(i) + "_mean";
  for (int i = 0; i < kNumArms; ++i) out += ",q" + std::to_string(i) + "_std";
  out += ",greedy\n";
  for (const auto& p : history) {
    out += std::to_string(p.trial_index);
    for (double m : p.mean) out += ',' + format_double(m);
    for (double s : p.std) out += ',' + format_double(s);
    out += ',' + std::to_string(p.greedy) + '\n';
  }
  return out;
}

std::string success_by_stage_svg(const std::vector<StageSummary>& summary) {
  std::vector<Series> series{{"baseline", {}}, {"gromp", {}}};
  for (const auto& s : summary) {
    series[s.arm == Arm::Baseline ? 0 : 1].points.emplace_back(s.stage_demos, s.mean);
  }
  return line_chart("Success rate by demonstrations", "demonstrations", "success rate", series, 0.0, 1.0);
}

std::string q_history_svg(const std::vector<QHistoryPoint>& history) {
  std::vector<Series> series;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < kNumArms; ++i) {
    Series s{"Q(" + std::to_string(i) + ")", {}};
    for (const auto& p : history) {
      s.points.emplace_back(p.trial_index, p.mean[i]);
      lo = std::min(lo, p.mean[i]);
      hi = std::max(hi, p.mean[i]);
    }
    series.push_back(std::move(s));
  }
  return line_chart("Projection values over trials", "trial", "Q", series, lo, hi);
}

void write_report(const ResultsTable& rows, const fs::path& out_dir) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "results table has no rows");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + out_dir.string() + "': " + ec.message());
  const auto summary = summarize_by_stage(rows);
  const auto history = q_history(rows);
  write_text_file_atomic(out_dir / "success_by_stage.csv", success_by_stage_csv(summary));
  write_text_file_atomic(out_dir / "q_history.csv", q_history_csv(history));
  write_text_file_atomic(out_dir / "success_by_stage.svg", success_by_stage_svg(summary));
  write_text_file_atomic(out_dir / "q_history.svg", q_history_svg(history));
}

}  // namespace gromp
