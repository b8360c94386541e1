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

#include <string>
#include <vector>

#include "promptbench/mask.hpp"
#include "promptbench/prompt.hpp"
#include "promptbench/rng.hpp"

namespace promptbench {

// k distinct foreground pixels drawn uniformly without replacement, in draw
// order. Throws InsufficientForeground("k,available").
std::vector<PromptPoint> sample_positive_points(const BinaryMask& mask, int k, SeededRng& rng);

// k distinct background pixels. Throws InsufficientBackground("k,available").
std::vector<PromptPoint> sample_negative_points(const BinaryMask& mask, int k, SeededRng& rng);

// Moves every side of box outward by round(pct * extent) along its axis
// (halves round away from zero), then clamps to the image.
BBox jittered_bbox(const BBox& box, double pct, int image_w, int image_h);

// Like jittered_bbox, but each side independently moves by
// round(u * pct * extent) with u uniform in [0, 1).
BBox jittered_bbox_random(const BBox& box, double pct, int image_w, int image_h, SeededRng& rng);

struct QuadrantSampleResult {
  std::vector<PromptPoint> points;
  // Quadrant indices (0 top-left, 1 top-right, 2 bottom-left, 3 bottom-right)
  // that held no foreground.
  std::vector<int> skipped;
};

QuadrantSampleResult quadrant_sample(const BinaryMask& mask, SeededRng& rng);

// Builds the prompt for one (strategy, ground truth) pair. Notes about skipped
// quadrants are appended to notes when it is non-null.
Prompt build_prompt(const StrategySpec& spec, const BinaryMask& gt, SeededRng& rng,
                    std::vector<std::string>* notes = nullptr);

}  // namespace promptbench
