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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "promptbench/error.hpp"
#include "promptbench/report.hpp"
#include "promptbench/runner.hpp"

using namespace promptbench;

namespace {

// An ok record whose IoU is exactly iou_thousandths / 100000.
EvalRecord with_iou(const std::string& strategy, std::uint64_t tp, std::uint64_t total,
                    const std::string& patient = "pat") {
  EvalRecord r;
  r.patch_id = "p" + std::to_string(tp) + "-" + std::to_string(total);
  r.patient_id = patient;
  r.strategy = strategy;
  r.counts = {tp, total - tp, 0, 1000};
  return r;
}

EvalRecord skipped(const std::string& strategy) {
  EvalRecord r;
  r.patch_id = "s";
  r.patient_id = "pat";
  r.strategy = strategy;
  r.status = RecordStatus::kSkipped;
  r.reason = "InsufficientForeground(need 10, have 3)";
  return r;
}

using Rgb = std::array<std::uint16_t, 3>;

Rgb at(const Image& img, int x, int y) { return {img.sample(x, y, 0), img.sample(x, y, 1), img.sample(x, y, 2)}; }

Rgb rgb(const std::uint8_t (&c)[3]) { return {c[0], c[1], c[2]}; }

std::vector<std::uint8_t> where(const Image& img, Rgb color) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(img.width * img.height));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) out[static_cast<std::size_t>(y * img.width + x)] = at(img, x, y) == color;
  }
  return out;
}

int components(const std::vector<std::uint8_t>& on, int w, int h) {
  std::vector<std::uint8_t> seen(on.size(), 0);
  int n = 0;
  for (std::size_t s = 0; s < on.size(); ++s) {
    if (!on[s] || seen[s]) continue;
    ++n;
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i) % w, y = static_cast<int>(i) / w;
      const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& p : nb) {
        if (p[0] < 0 || p[1] < 0 || p[0] >= w || p[1] >= h) continue;
        const auto j = static_cast<std::size_t>(p[1] * w + p[0]);
        if (on[j] && !seen[j]) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }
  return n;
}

}  // namespace

TEST(Summarize, PerfectRecords) {
  std::vector<EvalRecord> rs{with_iou("box", 50, 50), with_iou("box", 20, 20), with_iou("center", 7, 7)};
  const auto rows = summarize(rs, "bcss");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].strategy, "box");
  EXPECT_EQ(rows[0].dataset, "bcss");
  EXPECT_EQ(rows[0].n, 2u);
  EXPECT_EQ(rows[0].mean_iou, 100.0);
  EXPECT_EQ(rows[0].mean_dice, 100.0);
  EXPECT_EQ(rows[0].dice_summary.min, 1.0);
  EXPECT_EQ(rows[0].dice_summary.max, 1.0);
  EXPECT_FALSE(rows[0].improvement_iou);
}

TEST(Summarize, ImprovementFromPairedStrategies) {
  std::vector<EvalRecord> rs{with_iou("points:k=3", 34093, 100000), with_iou("points+box:k=3", 72311, 100000),
                             with_iou("negmix:k=10,neg=0.5,box=false", 1, 2),
                             with_iou("negmix:k=10,neg=0.5,box=true", 3, 4)};
  const auto rows = summarize(rs, "bcss");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NEAR(rows[0].mean_iou, 34.093, 1e-9);
  EXPECT_FALSE(rows[0].improvement_iou);
  ASSERT_TRUE(rows[1].improvement_iou);
  EXPECT_NEAR(*rows[1].improvement_iou, 112.099, 0.0005);
  EXPECT_NEAR(*rows[1].improvement_iou, (72.311 - 34.093) / 34.093 * 100.0, 1e-9);
  ASSERT_TRUE(rows[3].improvement_iou);
  EXPECT_NEAR(*rows[3].improvement_iou, 50.0, 1e-9);
  const double d0 = 2.0 / 3.0 * 100.0, d1 = 6.0 / 7.0 * 100.0;
  const double r0 = std::round(d0 * 1000) / 1000, r1 = std::round(d1 * 1000) / 1000;
  EXPECT_NEAR(*rows[3].improvement_dice, (r1 - r0) / r0 * 100.0, 1e-9);
}

TEST(Summarize, HandComputedMeanAndCounts) {
  // IoU values 0.1 .. 0.7 over seven records, plus one skip and one failure.
  std::vector<EvalRecord> rs;
  for (std::uint64_t k = 1; k <= 7; ++k) rs.push_back(with_iou("box", k, 10));
  rs.push_back(skipped("box"));
  auto f = skipped("box");
  f.status = RecordStatus::kFailed;
  rs.push_back(f);
  const auto rows = summarize(rs, "x");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].n, 7u);
  EXPECT_EQ(rows[0].skipped, 1u);
  EXPECT_EQ(rows[0].failed, 1u);
  EXPECT_NEAR(rows[0].mean_iou, 40.0, 1e-9);
  double dice = 0;
  for (int k = 1; k <= 7; ++k) dice += 2.0 * k / (2.0 * k + (10 - k));
  EXPECT_NEAR(rows[0].mean_dice, dice / 7 * 100, 1e-9);
  EXPECT_NEAR(rows[0].dice_summary.median, 8.0 / 14.0, 1e-12);
}

TEST(Summarize, PatientAggregation) {
  // Patient a: IoU 1.0 and 0.0 is impossible (tp>0), so use 0.9 / 0.1; patient b: 0.6.
  std::vector<EvalRecord> rs{with_iou("box", 9, 10, "a"), with_iou("box", 1, 10, "a"), with_iou("box", 6, 10, "b")};
  rs[1].patch_id = "q";
  EXPECT_NEAR(summarize(rs, "d", Aggregation::kPatch)[0].mean_iou, (90.0 + 10.0 + 60.0) / 3, 1e-9);
  EXPECT_NEAR(summarize(rs, "d", Aggregation::kPatient)[0].mean_iou, (50.0 + 60.0) / 2, 1e-9);
}

TEST(Summarize, Errors) {
  std::vector<EvalRecord> none;
  try {
    summarize(none, "d");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyList);
  }
  std::vector<EvalRecord> only_skips{with_iou("box", 1, 2), skipped("points:k=100")};
  try {
    summarize(only_skips, "d");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoOkRecords);
    EXPECT_EQ(e.detail(), "points:k=100");
  }
}

TEST(Scatter, Deviations) {
  const auto effort = EffortMap::defaults();
  std::vector<EvalRecord> single{with_iou("box", 1, 2)};
  const auto rows1 = summarize(single, "d");
  const auto s1 = scatter_data(rows1, effort);
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_EQ(s1[0].delta_dice, 0.0);
  EXPECT_EQ(s1[0].effort, 1.0);

  SummaryRow a, b;
  a.strategy = "quad4";
  a.mean_dice = 80;
  b.strategy = "box";
  b.mean_dice = 60;
  const std::vector<SummaryRow> rows2{a, b};
  const auto s2 = scatter_data(rows2, effort);
  ASSERT_EQ(s2.size(), 2u);
  EXPECT_EQ(s2[0].strategy, "box");
  EXPECT_DOUBLE_EQ(s2[0].delta_dice, -10.0);
  EXPECT_DOUBLE_EQ(s2[1].delta_dice, 10.0);
  EXPECT_EQ(s2[1].effort, 4.0);
}

TEST(Scatter, DeviationsSumToZero) {
  std::mt19937_64 gen(71);
  std::uniform_real_distribution<double> u(0, 100);
  const char* names[] = {"box", "points:k=3", "points+box:k=3", "center", "centroid", "quad4", "negmix:k=10,neg=0.5,box=true"};
  for (int t = 0; t < 200; ++t) {
    std::vector<SummaryRow> rows;
    for (const char* n : names) {
      SummaryRow r;
      r.strategy = n;
      r.mean_dice = u(gen);
      rows.push_back(r);
    }
    const auto pts = scatter_data(rows, EffortMap::defaults());
    const double sum = std::accumulate(pts.begin(), pts.end(), 0.0,
                                       [](double acc, const ScatterPoint& p) { return acc + p.delta_dice; });
    ASSERT_NEAR(sum, 0.0, 1e-9);
    for (std::size_t i = 1; i < pts.size(); ++i) ASSERT_LE(pts[i - 1].effort, pts[i].effort);
  }
}

TEST(Scatter, EffortMap) {
  const auto m = EffortMap::parse("# custom\npoints = 5\nbox:jitter=0.2 = 1.5\n\n");
  EXPECT_EQ(m.lookup("points:k=50"), 5.0);
  EXPECT_EQ(m.lookup("box:jitter=0.2"), 1.5);
  EXPECT_FALSE(m.lookup("box"));
  EXPECT_THROW(EffortMap::parse("points 5\n"), Error);
  EXPECT_THROW(EffortMap::parse("points = five\n"), Error);
  SummaryRow r;
  r.strategy = "box";
  const std::vector<SummaryRow> rows{r};
  try {
    scatter_data(rows, m);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingEffortScore);
    EXPECT_EQ(e.detail(), "box");
  }
}

TEST(Render, CsvAndMarkdownShape) {
  std::vector<EvalRecord> rs{with_iou("points:k=3", 34093, 100000), with_iou("points+box:k=3", 72311, 100000),
                             with_iou("box", 1, 1), with_iou("box:jitter=0.1", 1, 2), with_iou("centroid", 1, 4)};
  const auto rows = summarize(rs, "d");
  const auto csv = render_summary_csv(rows);
  EXPECT_EQ(csv.rfind("# ", 0), 0u);
  EXPECT_NE(csv.find("+112.099"), std::string::npos) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2 + 5);
  const auto md = render_markdown(rows);
  EXPECT_NE(md.find("| 3 Positive Points | d | 34.093 |"), std::string::npos) << md;
  EXPECT_NE(md.find("+112.099"), std::string::npos);
  EXPECT_NE(md.find("box:jitter=0.1"), std::string::npos);
  EXPECT_NE(md.find("centroid"), std::string::npos);
  const auto svg = render_boxplot_svg(rows, "t");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  const auto pts = scatter_data(rows, EffortMap::defaults());
  EXPECT_NE(render_scatter_svg(pts, "t").find("</svg>"), std::string::npos);
  EXPECT_EQ(render_scatter_csv(pts).rfind("# promptbench-scatter v1\nstrategy,dataset,effort,delta_dice\n", 0), 0u);
}

TEST(Overlay, MarkerAndBoxCensus) {
  const Image img = Image::gray(40, 30, std::vector<std::uint16_t>(1200, 90));
  const auto empty = BinaryMask::filled(40, 30, false);
  Prompt p;
  p.points = {{{5, 5}, Polarity::kPositive}, {{20, 15}, Polarity::kPositive}, {{35, 25}, Polarity::kPositive},
              {{5, 25}, Polarity::kNegative}};
  const auto out = render_overlay(img, p, empty);
  ASSERT_EQ(out.channels, 3);
  const auto green = where(out, rgb(OverlayColors::kPositive));
  EXPECT_EQ(components(green, 40, 30), 3);
  EXPECT_EQ(std::count(green.begin(), green.end(), 1), 3 * 25);
  EXPECT_EQ(components(where(out, rgb(OverlayColors::kNegative)), 40, 30), 1);
  EXPECT_EQ(at(out, 0, 0), (Rgb{90, 90, 90}));

  Prompt box_only;
  box_only.box = BBox{2, 3, 12, 9};
  const auto boxed = render_overlay(img, box_only, empty);
  const auto yellow = where(boxed, rgb(OverlayColors::kBox));
  EXPECT_EQ(std::count(yellow.begin(), yellow.end(), 1), 2 * 11 + 2 * 7 - 4);
  EXPECT_EQ(components(yellow, 40, 30), 1);
  const auto no_markers = where(boxed, rgb(OverlayColors::kPositive));
  EXPECT_EQ(std::count(no_markers.begin(), no_markers.end(), 1), 0);
  for (int x = 2; x <= 12; ++x) EXPECT_EQ(at(boxed, x, 3), rgb(OverlayColors::kBox));
  EXPECT_EQ(at(boxed, 7, 6), (Rgb{90, 90, 90}));

  EXPECT_EQ(render_overlay(img, p, empty).samples, out.samples);
}

TEST(Overlay, ContourRing) {
  const Image img = Image::gray(20, 20, std::vector<std::uint16_t>(400, 0));
  const auto gt = oracle::box_mask(20, 20, {4, 4, 8, 8});
  Prompt p;
  p.points = {{{15, 15}, Polarity::kPositive}};
  const auto out = render_overlay(img, p, gt);
  const auto red = where(out, rgb(OverlayColors::kContour));
  EXPECT_EQ(std::count(red.begin(), red.end(), 1), 16);
  EXPECT_EQ(at(out, 6, 6), (Rgb{0, 0, 0}));
  oracle::TempDir tmp("overlay");
  render_overlay(img, p, gt, tmp / "o.png");
  EXPECT_EQ(read_image(tmp / "o.png").samples, out.samples);
  Prompt outside;
  outside.points = {{{20, 0}, Polarity::kPositive}};
  EXPECT_THROW(render_overlay(img, outside, gt), Error);
}
