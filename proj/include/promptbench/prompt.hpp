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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promptbench/mask.hpp"

namespace promptbench {

enum class Polarity : std::uint8_t { kNegative = 0, kPositive = 1 };

struct PromptPoint {
  PixelPoint point;
  Polarity polarity = Polarity::kPositive;

  friend bool operator==(const PromptPoint&, const PromptPoint&) = default;
};

// What one segmenter call receives. Never empty: a box, at least one point,
// or both.
//
// Positive points lie on ground-truth foreground and negative points on
// background, with one exception: the BoxCenter strategy sends the raw box
// center as a positive point whatever the pixel underneath is.
struct Prompt {
  std::optional<BBox> box;
  std::vector<PromptPoint> points;

  std::size_t positive_count() const;
  std::size_t negative_count() const;

  friend bool operator==(const Prompt&, const Prompt&) = default;
};

// Throws InvalidArgument if the prompt is empty or has coordinates outside a
// width x height image.
void validate_prompt(const Prompt& prompt, int width, int height);

enum class StrategyKind {
  kPositivePoints,
  kBoxOnly,
  kPointsPlusBox,
  kJitteredBox,
  kNegativeMix,
  kBoxCenter,
  kCentroid,
  kQuadrantSample,
};

enum class JitterMode { kDeterministic, kRandom };

// One sampling strategy variant. Canonical text forms:
//
//   points:k=50                 k positive points
//   points+box:k=10             k positive points plus the tight box
//   box                         tight box
//   box:jitter=0.2              tight box grown by 20% of each extent per side
//   box:jitter=0.2,mode=random  each side grown by U[0,1) * 20% of the extent
//   negmix:k=100,neg=0.5,box=true
//   center                      box center as one positive point
//   centroid                    ground-truth centroid as one positive point
//   quad4                       one positive point per tight-box quadrant
//
// Fractions are printed in shortest round-trip decimal form, so "0.20"
// parses and re-prints as "0.2".
struct StrategySpec {
  StrategyKind kind = StrategyKind::kBoxOnly;
  int k_points = 0;
  double jitter_pct = 0.0;
  JitterMode jitter_mode = JitterMode::kDeterministic;
  double negative_fraction = 0.0;
  bool with_box = false;

  static StrategySpec parse(std::string_view text);
  std::string canonical() const;
  // Throws InvalidArgument when parameters are inconsistent with kind.
  void validate() const;

  bool uses_points() const;

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

}  // namespace promptbench
