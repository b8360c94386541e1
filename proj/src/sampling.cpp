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

#include "promptbench/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "promptbench/error.hpp"

namespace promptbench {
namespace {

std::vector<PromptPoint> sample_where(const BinaryMask& mask, bool value, int k, SeededRng& rng,
                                      Polarity polarity, ErrorCode shortage) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be >= 1");
  const std::size_t available = value ? mask.foreground_count() : mask.background_count();
  if (available < static_cast<std::size_t>(k)) {
    fail(shortage, std::to_string(k) + "," + std::to_string(available));
  }
  std::vector<std::uint32_t> pool;
  pool.reserve(available);
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if ((bits[i] != 0) == value) pool.push_back(static_cast<std::uint32_t>(i));
  }
  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  std::vector<PromptPoint> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const std::size_t j = i + rng.uniform_below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    const auto idx = pool[i];
    out.push_back({{static_cast<int>(idx % static_cast<std::uint32_t>(mask.width())),
                    static_cast<int>(idx / static_cast<std::uint32_t>(mask.width()))},
                   polarity});
  }
  return out;
}

int clamp_to(int v, int hi) { return std::clamp(v, 0, hi); }

int grow(double pct, int extent) { return static_cast<int>(std::lround(pct * extent)); }

}  // namespace

std::vector<PromptPoint> sample_positive_points(const BinaryMask& mask, int k, SeededRng& rng) {
  return sample_where(mask, true, k, rng, Polarity::kPositive,
                      ErrorCode::kInsufficientForeground);
}

std::vector<PromptPoint> sample_negative_points(const BinaryMask& mask, int k, SeededRng& rng) {
  return sample_where(mask, false, k, rng, Polarity::kNegative,
                      ErrorCode::kInsufficientBackground);
}

BBox jittered_bbox(const BBox& box, double pct, int image_w, int image_h) {
  const int dx = grow(pct, box.extent_x());
  const int dy = grow(pct, box.extent_y());
  return {clamp_to(box.x_min - dx, image_w - 1), clamp_to(box.y_min - dy, image_h - 1),
          clamp_to(box.x_max + dx, image_w - 1), clamp_to(box.y_max + dy, image_h - 1)};
}

BBox jittered_bbox_random(const BBox& box, double pct, int image_w, int image_h, SeededRng& rng) {
  const int left = grow(rng.uniform01() * pct, box.extent_x());
  const int top = grow(rng.uniform01() * pct, box.extent_y());
  const int right = grow(rng.uniform01() * pct, box.extent_x());
  const int bottom = grow(rng.uniform01() * pct, box.extent_y());
  return {clamp_to(box.x_min - left, image_w - 1), clamp_to(box.y_min - top, image_h - 1),
          clamp_to(box.x_max + right, image_w - 1), clamp_to(box.y_max + bottom, image_h - 1)};
}

QuadrantSampleResult quadrant_sample(const BinaryMask& mask, SeededRng& rng) {
  const auto views = quadrant_partition(mask);
  QuadrantSampleResult result;
  for (int q = 0; q < 4; ++q) {
    const BinaryMask& view = views[static_cast<std::size_t>(q)];
    if (view.empty()) {
      result.skipped.push_back(q);
      continue;
    }
    auto nth = rng.uniform_below(view.foreground_count());
    const auto bits = view.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == 0) continue;
      if (nth-- == 0) {
        result.points.push_back({{static_cast<int>(i % static_cast<std::size_t>(view.width())),
                                  static_cast<int>(i / static_cast<std::size_t>(view.width()))},
                                 Polarity::kPositive});
        break;
      }
    }
  }
  return result;
}

Prompt build_prompt(const StrategySpec& spec, const BinaryMask& gt, SeededRng& rng,
                    std::vector<std::string>* notes) {
  spec.validate();
  if (gt.empty()) fail(ErrorCode::kEmptyMask);
  Prompt prompt;
  switch (spec.kind) {
    case StrategyKind::kPositivePoints:
      prompt.points = sample_positive_points(gt, spec.k_points, rng);
      break;
    case StrategyKind::kBoxOnly:
      prompt.box = tight_bbox(gt);
      break;
    case StrategyKind::kPointsPlusBox:
      prompt.points = sample_positive_points(gt, spec.k_points, rng);
      prompt.box = tight_bbox(gt);
      break;
    case StrategyKind::kJitteredBox:
      prompt.box = spec.jitter_mode == JitterMode::kRandom
                       ? jittered_bbox_random(tight_bbox(gt), spec.jitter_pct, gt.width(),
                                              gt.height(), rng)
                       : jittered_bbox(tight_bbox(gt), spec.jitter_pct, gt.width(), gt.height());
      break;
    case StrategyKind::kNegativeMix: {
      // The epsilon keeps e.g. 100 * 0.29 from flooring to 28.
      const int negatives = static_cast<int>(std::floor(spec.k_points * spec.negative_fraction + 1e-9));
      const int positives = spec.k_points - negatives;
      prompt.points = sample_positive_points(gt, positives, rng);
      if (negatives > 0) {
        auto neg = sample_negative_points(gt, negatives, rng);
        prompt.points.insert(prompt.points.end(), neg.begin(), neg.end());
      }
      if (spec.with_box) prompt.box = tight_bbox(gt);
      break;
    }
    case StrategyKind::kBoxCenter:
      prompt.points.push_back({box_center(tight_bbox(gt)), Polarity::kPositive});
      break;
    case StrategyKind::kCentroid:
      prompt.points.push_back({centroid(gt), Polarity::kPositive});
      break;
    case StrategyKind::kQuadrantSample: {
      auto result = quadrant_sample(gt, rng);
      if (notes) {
        for (int q : result.skipped) {
          notes->push_back("empty quadrant " + std::to_string(q) + " skipped");
        }
      }
      prompt.points = std::move(result.points);
      break;
    }
  }
  return prompt;
}

}  // namespace promptbench
