// Copyright 2026 The promptbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "promptbench/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "promptbench/error.hpp"

namespace promptbench {
namespace {

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string pct(double v) { return format_fixed(v, 3); }

std::string signed_pct(const std::optional<double>& v) {
  return v ? format_fixed(*v, 3, true) : "-";
}

std::string kind_name(const StrategySpec& s) {
  switch (s.kind) {
    case StrategyKind::kPositivePoints: return "points";
    case StrategyKind::kPointsPlusBox: return "points+box";
    case StrategyKind::kBoxOnly:
    case StrategyKind::kJitteredBox: return "box";
    case StrategyKind::kNegativeMix: return "negmix";
    case StrategyKind::kBoxCenter: return "center";
    case StrategyKind::kCentroid: return "centroid";
    case StrategyKind::kQuadrantSample: return "quad4";
  }
  return {};
}

std::optional<StrategySpec> try_parse(const std::string& s) {
  try {
    return StrategySpec::parse(s);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string experiment_label(const StrategySpec& s) {
  switch (s.kind) {
    case StrategyKind::kPositivePoints:
    case StrategyKind::kPointsPlusBox:
      return std::to_string(s.k_points) + " Positive Points";
    case StrategyKind::kBoxOnly:
      return "Normal Bounding Box";
    case StrategyKind::kJitteredBox:
      return "Bounding Box with " + shortest(round_to(s.jitter_pct * 100.0, 6)) + "% Jitter" +
             (s.jitter_mode == JitterMode::kRandom ? " (random)" : "");
    case StrategyKind::kNegativeMix: {
      const int neg = static_cast<int>(std::floor(s.k_points * s.negative_fraction + 1e-9));
      return std::to_string(s.k_points - neg) + " Positive + " + std::to_string(neg) +
             " Negative Points" + (s.with_box ? " with Bounding Box" : "");
    }
    case StrategyKind::kBoxCenter:
      return "Center of Curated Bounding Box";
    case StrategyKind::kCentroid:
      return "Centroid of Ground Truth";
    case StrategyKind::kQuadrantSample:
      return "Dividing Ground Truth into 4 Sections";
  }
  return {};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num2(double v) { return format_fixed(v, 2); }

// Groups rows by experiment label (first appearance order), keeping dataset
// order within each group.
template <typename Pred>
std::vector<std::pair<std::string, std::vector<const SummaryRow*>>> group_rows(
    std::span<const SummaryRow> rows, Pred keep) {
  std::vector<std::pair<std::string, std::vector<const SummaryRow*>>> groups;
  for (const auto& r : rows) {
    auto spec = try_parse(r.strategy);
    if (!spec || !keep(*spec)) continue;
    const std::string label = experiment_label(*spec);
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == label; });
    if (it == groups.end()) {
      groups.push_back({label, {}});
      it = groups.end() - 1;
    }
    it->second.push_back(&r);
  }
  return groups;
}

}  // namespace

std::vector<SummaryRow> summarize(std::span<const EvalRecord> records, const std::string& dataset,
                                  Aggregation aggregation) {
  if (records.empty()) fail(ErrorCode::kEmptyList, "no records");
  std::vector<std::string> order;
  for (const auto& r : records) {
    if (std::find(order.begin(), order.end(), r.strategy) == order.end()) {
      order.push_back(r.strategy);
    }
  }
  std::vector<SummaryRow> rows;
  for (const auto& strategy : order) {
    SummaryRow row;
    row.strategy = strategy;
    row.dataset = dataset;
    std::vector<double> dices;
    std::vector<double> ious;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_patient;
    for (const auto& r : records) {
      if (r.strategy != strategy) continue;
      if (r.status == RecordStatus::kSkipped) ++row.skipped;
      if (r.status == RecordStatus::kFailed) ++row.failed;
      if (!r.ok()) continue;
      dices.push_back(r.dice());
      ious.push_back(r.iou());
      by_patient[r.patient_id].first.push_back(r.dice());
      by_patient[r.patient_id].second.push_back(r.iou());
    }
    if (dices.empty()) fail(ErrorCode::kNoOkRecords, strategy);
    row.n = dices.size();
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    if (aggregation == Aggregation::kPatch) {
      row.mean_dice = 100.0 * mean(dices);
      row.mean_iou = 100.0 * mean(ious);
    } else {
      std::vector<double> pd;
      std::vector<double> pi;
      for (const auto& [patient, scores] : by_patient) {
        pd.push_back(mean(scores.first));
        pi.push_back(mean(scores.second));
      }
      row.mean_dice = 100.0 * mean(pd);
      row.mean_iou = 100.0 * mean(pi);
    }
    row.dice_summary = five_number_summary(dices);
    rows.push_back(std::move(row));
  }

  for (auto& row : rows) {
    auto spec = try_parse(row.strategy);
    if (!spec) continue;
    std::optional<std::string> partner;
    if (spec->kind == StrategyKind::kPointsPlusBox) {
      partner = "points:k=" + std::to_string(spec->k_points);
    } else if (spec->kind == StrategyKind::kNegativeMix && spec->with_box) {
      StrategySpec base = *spec;
      base.with_box = false;
      partner = base.canonical();
    }
    if (!partner) continue;
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const SummaryRow& r) { return r.strategy == *partner; });
    if (it == rows.end()) continue;
    const double base_iou = round_to(it->mean_iou, 3);
    const double base_dice = round_to(it->mean_dice, 3);
    if (base_iou > 0) row.improvement_iou = improvement_pct(base_iou, round_to(row.mean_iou, 3));
    if (base_dice > 0) {
      row.improvement_dice = improvement_pct(base_dice, round_to(row.mean_dice, 3));
    }
  }
  return rows;
}

EffortMap EffortMap::defaults() {
  EffortMap m;
  m.set("box", 1);
  m.set("points", 2);
  m.set("points+box", 3);
  m.set("center", 3);
  m.set("centroid", 3);
  m.set("quad4", 4);
  m.set("negmix", 4);
  return m;
}

EffortMap EffortMap::parse(const std::string& text) {
  EffortMap m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.rfind('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kParseError, "line " + std::to_string(lineno) + ": expected key = score");
    }
    std::string key = line.substr(first, eq - first);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
    double score = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), score);
    if (key.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size()) {
      fail(ErrorCode::kParseError, "line " + std::to_string(lineno) + ": bad entry");
    }
    m.set(key, score);
  }
  return m;
}

std::optional<double> EffortMap::lookup(const std::string& strategy) const {
  if (auto it = scores_.find(strategy); it != scores_.end()) return it->second;
  if (auto spec = try_parse(strategy)) {
    if (auto it = scores_.find(kind_name(*spec)); it != scores_.end()) return it->second;
  }
  return std::nullopt;
}

std::vector<ScatterPoint> scatter_data(std::span<const SummaryRow> rows, const EffortMap& effort) {
  if (rows.empty()) return {};
  double grand = 0;
  for (const auto& r : rows) grand += r.mean_dice;
  grand /= static_cast<double>(rows.size());
  std::vector<ScatterPoint> points;
  for (const auto& r : rows) {
    const auto score = effort.lookup(r.strategy);
    if (!score) fail(ErrorCode::kMissingEffortScore, r.strategy);
    points.push_back({r.strategy, r.dataset, *score, r.mean_dice - grand});
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const ScatterPoint& a, const ScatterPoint& b) { return a.effort < b.effort; });
  return points;
}

std::string render_markdown(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "# Segmentation results\n";

  // Points with and without box.
  std::vector<int> ks;
  std::vector<std::string> datasets;
  for (const auto& r : rows) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) {
      datasets.push_back(r.dataset);
    }
    auto spec = try_parse(r.strategy);
    if (spec && (spec->kind == StrategyKind::kPositivePoints ||
                 spec->kind == StrategyKind::kPointsPlusBox) &&
        std::find(ks.begin(), ks.end(), spec->k_points) == ks.end()) {
      ks.push_back(spec->k_points);
    }
  }
  std::sort(ks.begin(), ks.end());
  auto find_row = [&](const std::string& strategy, const std::string& dataset) -> const SummaryRow* {
    for (const auto& r : rows) {
      if (r.strategy == strategy && r.dataset == dataset) return &r;
    }
    return nullptr;
  };
  if (!ks.empty()) {
    out << "\n## Positive points with and without bounding box\n\n"
        << "| Experiment | Dataset | Without BB IoU | Without BB Dice | With BB IoU | With BB Dice "
           "| Improvement with BB IoU (%) | Improvement with BB Dice (%) |\n"
        << "|---|---|---:|---:|---:|---:|---:|---:|\n";
    for (int k : ks) {
      for (const auto& ds : datasets) {
        const auto* without = find_row("points:k=" + std::to_string(k), ds);
        const auto* with = find_row("points+box:k=" + std::to_string(k), ds);
        if (!without && !with) continue;
        out << "| " << k << " Positive Points | " << ds << " | "
            << (without ? pct(without->mean_iou) : "-") << " | "
            << (without ? pct(without->mean_dice) : "-") << " | "
            << (with ? pct(with->mean_iou) : "-") << " | " << (with ? pct(with->mean_dice) : "-")
            << " | " << (with ? signed_pct(with->improvement_iou) : "-") << " | "
            << (with ? signed_pct(with->improvement_dice) : "-") << " |\n";
      }
    }
  }

  auto simple_table = [&](const char* title, auto keep) {
    const auto groups = group_rows(rows, keep);
    if (groups.empty()) return;
    out << "\n## " << title << "\n\n"
        << "| Experiment | Dataset | IoU | Dice |\n|---|---|---:|---:|\n";
    for (const auto& [label, members] : groups) {
      for (const auto* r : members) {
        out << "| " << label << " | " << r->dataset << " | " << pct(r->mean_iou) << " | "
            << pct(r->mean_dice) << " |\n";
      }
    }
  };
  simple_table("Bounding box jitter", [](const StrategySpec& s) {
    return s.kind == StrategyKind::kBoxOnly || s.kind == StrategyKind::kJitteredBox;
  });
  simple_table("Special sampling strategies", [](const StrategySpec& s) {
    return s.kind == StrategyKind::kNegativeMix || s.kind == StrategyKind::kBoxCenter ||
           s.kind == StrategyKind::kCentroid || s.kind == StrategyKind::kQuadrantSample;
  });

  out << "\n## All strategies\n\n"
      << "| Strategy | Dataset | n | Skipped | Failed | IoU | Dice | Dice min | Dice Q1 | Dice "
         "median | Dice Q3 | Dice max |\n"
      << "|---|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    const auto& f = r.dice_summary;
    out << "| `" << r.strategy << "` | " << r.dataset << " | " << r.n << " | " << r.skipped
        << " | " << r.failed << " | " << pct(r.mean_iou) << " | " << pct(r.mean_dice) << " | "
        << pct(100 * f.min) << " | " << pct(100 * f.q1) << " | " << pct(100 * f.median) << " | "
        << pct(100 * f.q3) << " | " << pct(100 * f.max) << " |\n";
  }
  return out.str();
}

std::string render_summary_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "# promptbench-summary v1\n"
      << "strategy,dataset,n,skipped,failed,mean_iou,mean_dice,dice_min,dice_q1,dice_median,"
         "dice_q3,dice_max,improvement_iou,improvement_dice\n";
  for (const auto& r : rows) {
    const auto& f = r.dice_summary;
    out << csv_field(r.strategy) << ',' << csv_field(r.dataset) << ',' << r.n << ',' << r.skipped
        << ',' << r.failed << ',' << pct(r.mean_iou) << ',' << pct(r.mean_dice) << ','
        << pct(100 * f.min) << ',' << pct(100 * f.q1) << ',' << pct(100 * f.median) << ','
        << pct(100 * f.q3) << ',' << pct(100 * f.max) << ','
        << (r.improvement_iou ? format_fixed(*r.improvement_iou, 3, true) : "") << ','
        << (r.improvement_dice ? format_fixed(*r.improvement_dice, 3, true) : "") << '\n';
  }
  return out.str();
}

std::string render_scatter_csv(std::span<const ScatterPoint> points) {
  std::ostringstream out;
  out << "# promptbench-scatter v1\nstrategy,dataset,effort,delta_dice\n";
  for (const auto& p : points) {
    out << csv_field(p.strategy) << ',' << csv_field(p.dataset) << ',' << shortest(p.effort) << ','
        << shortest(p.delta_dice) << '\n';
  }
  return out.str();
}

std::string render_scatter_svg(std::span<const ScatterPoint> points, const std::string& title) {
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  double xmin = 0, xmax = 1, ymin = -1, ymax = 1;
  if (!points.empty()) {
    xmin = xmax = points.front().effort;
    ymin = ymax = points.front().delta_dice;
    for (const auto& p : points) {
      xmin = std::min(xmin, p.effort);
      xmax = std::max(xmax, p.effort);
      ymin = std::min(ymin, p.delta_dice);
      ymax = std::max(ymax, p.delta_dice);
    }
  }
  xmin -= 0.5;
  xmax += 0.5;
  const double span_y = std::max(1.0, ymax - ymin);
  ymin -= 0.1 * span_y;
  ymax += 0.1 * span_y;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kW - kLeft - kRight); };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * (kH - kTop - kBottom); };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << svg_escape(title) << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << num2(sy(0)) << "\" x2=\"" << kW - kRight
      << "\" y2=\"" << num2(sy(0)) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
      << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\">implementation effort</text>\n"
      << "<text x=\"16\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 16 " << kH / 2
      << ")\" text-anchor=\"middle\">Dice change to average (points)</text>\n";
  for (const auto& p : points) {
    out << "<circle cx=\"" << num2(sx(p.effort)) << "\" cy=\"" << num2(sy(p.delta_dice))
        << "\" r=\"4\" fill=\"#1f77b4\"><title>" << svg_escape(p.strategy + " [" + p.dataset + "] " +
                                                               format_fixed(p.delta_dice, 3))
        << "</title></circle>\n"
        << "<text x=\"" << num2(sx(p.effort) + 6) << "\" y=\"" << num2(sy(p.delta_dice) + 4)
        << "\">" << svg_escape(p.strategy) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_boxplot_svg(std::span<const SummaryRow> rows, const std::string& title) {
  constexpr double kRowH = 22, kLeft = 260, kPlotW = 400, kTop = 40;
  const double height = kTop + kRowH * static_cast<double>(rows.size()) + 40;
  auto sx = [&](double v) { return kLeft + v * kPlotW; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + kPlotW + 30
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << (kLeft + kPlotW) / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << svg_escape(title) << "</text>\n";
  for (int t = 0; t <= 10; t += 2) {
    const double x = sx(t / 10.0);
    out << "<line x1=\"" << num2(x) << "\" y1=\"" << kTop - 5 << "\" x2=\"" << num2(x)
        << "\" y2=\"" << num2(height - 35) << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << num2(x) << "\" y=\"" << num2(height - 22)
        << "\" text-anchor=\"middle\">" << format_fixed(t / 10.0, 1) << "</text>\n";
  }
  double y = kTop;
  for (const auto& r : rows) {
    const auto& f = r.dice_summary;
    const double mid = y + kRowH / 2;
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << num2(mid + 4) << "\" text-anchor=\"end\">"
        << svg_escape(r.strategy + " [" + r.dataset + "]") << "</text>\n"
        << "<line x1=\"" << num2(sx(f.min)) << "\" y1=\"" << num2(mid) << "\" x2=\""
        << num2(sx(f.max)) << "\" y2=\"" << num2(mid) << "\" stroke=\"black\"/>\n"
        << "<rect x=\"" << num2(sx(f.q1)) << "\" y=\"" << num2(y + 4) << "\" width=\""
        << num2(sx(f.q3) - sx(f.q1)) << "\" height=\"" << num2(kRowH - 8)
        << "\" fill=\"#aec7e8\" stroke=\"black\"/>\n"
        << "<line x1=\"" << num2(sx(f.median)) << "\" y1=\"" << num2(y + 4) << "\" x2=\""
        << num2(sx(f.median)) << "\" y2=\"" << num2(y + kRowH - 4)
        << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    y += kRowH;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace promptbench
