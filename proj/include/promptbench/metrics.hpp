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

#include <cstdint>
#include <span>
#include <string>

#include "promptbench/kernels.hpp"
#include "promptbench/mask.hpp"

namespace promptbench {

// Exact ratio of pixel counts. A 0/0 ratio stands for agreement between two
// empty masks and evaluates to 1.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  double value() const {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct ScorePair {
  Ratio dice;
  Ratio iou;
};

// Throws DimensionMismatch if the masks differ in size.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

// 2*TP / (2*TP + FP + FN)
Ratio dice_ratio(const ConfusionCounts& c);
// TP / (TP + FP + FN), i.e. |pred & gt| / |pred | gt|
Ratio iou_ratio(const ConfusionCounts& c);
ScorePair score(const ConfusionCounts& c);

double dice(const BinaryMask& pred, const BinaryMask& gt);
double iou(const BinaryMask& pred, const BinaryMask& gt);

// (variant - baseline) / baseline * 100. Throws ZeroBaseline if baseline <= 0.
double improvement_pct(double baseline, double variant);

// Rounds half away from zero to the given number of decimals.
double round_to(double v, int decimals);
// Fixed-point with the given decimals; "+" prefix when signed and positive.
std::string format_fixed(double v, int decimals, bool signed_plus = false);

struct FiveNumberSummary {
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;
};

// Quartiles by linear interpolation between order statistics (Hyndman-Fan
// type 7): q(p) = x[floor(h)] + (h - floor(h)) * (x[floor(h)+1] - x[floor(h)])
// with h = (n - 1) * p. Throws EmptyList.
FiveNumberSummary five_number_summary(std::span<const double> scores);

}  // namespace promptbench
