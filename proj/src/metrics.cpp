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

#include "promptbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "promptbench/error.hpp"

namespace promptbench {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    fail(ErrorCode::kDimensionMismatch,
         std::to_string(pred.width()) + "x" + std::to_string(pred.height()) + " vs " +
             std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  return kernels::confusion(pred.bits(), gt.bits());
}

Ratio dice_ratio(const ConfusionCounts& c) { return {2 * c.tp, 2 * c.tp + c.fp + c.fn}; }

Ratio iou_ratio(const ConfusionCounts& c) { return {c.tp, c.tp + c.fp + c.fn}; }

ScorePair score(const ConfusionCounts& c) { return {dice_ratio(c), iou_ratio(c)}; }

double dice(const BinaryMask& pred, const BinaryMask& gt) {
  return dice_ratio(confusion(pred, gt)).value();
}

double iou(const BinaryMask& pred, const BinaryMask& gt) {
  return iou_ratio(confusion(pred, gt)).value();
}

double improvement_pct(double baseline, double variant) {
  if (!(baseline > 0.0)) fail(ErrorCode::kZeroBaseline, std::to_string(baseline));
  return (variant - baseline) / baseline * 100.0;
}

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

std::string format_fixed(double v, int decimals, bool signed_plus) {
  double r = round_to(v, decimals);
  if (r == 0.0) r = 0.0;  // no "-0.000"
  char buf[64];
  std::snprintf(buf, sizeof(buf), signed_plus ? "%+.*f" : "%.*f", decimals, r);
  return buf;
}

FiveNumberSummary five_number_summary(std::span<const double> scores) {
  if (scores.empty()) fail(ErrorCode::kEmptyList);
  std::vector<double> x(scores.begin(), scores.end());
  std::sort(x.begin(), x.end());
  auto quantile = [&](double p) {
    const double h = static_cast<double>(x.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
  };
  return {x.front(), quantile(0.25), quantile(0.5), quantile(0.75), x.back()};
}

}  // namespace promptbench
