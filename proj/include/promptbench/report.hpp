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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "promptbench/metrics.hpp"
#include "promptbench/prompt.hpp"
#include "promptbench/raster.hpp"
#include "promptbench/runner.hpp"

namespace promptbench {

// Per-strategy aggregate. Means are percentages (0..100) over ok records;
// dice_summary is in fractions (0..1).
struct SummaryRow {
  std::string strategy;
  std::string dataset;
  std::size_t n = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  double mean_iou = 0;
  double mean_dice = 0;
  FiveNumberSummary dice_summary;
  // Set on a with-box row that has a without-box partner (points:k=N vs
  // points+box:k=N, negmix box=false vs box=true): percent change of the
  // 3-decimal means.
  std::optional<double> improvement_iou;
  std::optional<double> improvement_dice;
};

enum class Aggregation {
  kPatch,    // mean over ok records
  kPatient,  // mean over patients of each patient's mean
};

struct RecordSet {
  std::string dataset;
  std::vector<EvalRecord> records;
};

// Rows in order of each strategy's first appearance. Throws NoOkRecords(strategy)
// when a strategy has no ok record, EmptyList when records is empty.
std::vector<SummaryRow> summarize(std::span<const EvalRecord> records, const std::string& dataset,
                                  Aggregation aggregation = Aggregation::kPatch);

// Effort scores for the effort-versus-performance scatter. Lookup tries the
// exact strategy string, then its kind name (points, points+box, box,
// negmix, center, centroid, quad4).
class EffortMap {
 public:
  // box=1, points=2, points+box=3, center=3, centroid=3, quad4=4, negmix=4.
  static EffortMap defaults();
  // "key = score" lines split at the last '=', '#' comments. Throws
  // ParseError("line N: ...").
  static EffortMap parse(const std::string& text);

  void set(const std::string& key, double score) { scores_[key] = score; }
  std::optional<double> lookup(const std::string& strategy) const;

 private:
  std::map<std::string, double> scores_;
};

struct ScatterPoint {
  std::string strategy;
  std::string dataset;
  double effort = 0;
  double delta_dice = 0;  // row mean dice minus the grand mean of row means
};

// Sorted by effort (stable). Throws MissingEffortScore(strategy).
std::vector<ScatterPoint> scatter_data(std::span<const SummaryRow> rows, const EffortMap& effort);

// Markdown report: points with/without box, box jitter, special strategies,
// and the full per-strategy table with dice five-number summaries.
std::string render_markdown(std::span<const SummaryRow> rows);
// RFC 4180 CSV with a version comment line.
std::string render_summary_csv(std::span<const SummaryRow> rows);
std::string render_scatter_csv(std::span<const ScatterPoint> points);
std::string render_scatter_svg(std::span<const ScatterPoint> points, const std::string& title);
std::string render_boxplot_svg(std::span<const SummaryRow> rows, const std::string& title);

// Overlay colors. The base image is rendered in gray, so these never occur in
// it.
struct OverlayColors {
  static constexpr std::uint8_t kContour[3] = {255, 0, 0};
  static constexpr std::uint8_t kBox[3] = {255, 255, 0};
  static constexpr std::uint8_t kPositive[3] = {0, 255, 0};
  static constexpr std::uint8_t kNegative[3] = {0, 128, 255};
};
inline constexpr int kMarkerRadius = 2;

// Gray copy of image with the gt contour, the box outline and a
// (2*kMarkerRadius+1)^2 square per point drawn on top, in that order.
Image render_overlay(const Image& image, const Prompt& prompt, const BinaryMask& gt);
// Writes render_overlay(...) (PNG for .png, PPM otherwise). Throws IoError.
void render_overlay(const Image& image, const Prompt& prompt, const BinaryMask& gt,
                    const std::filesystem::path& out);

}  // namespace promptbench
