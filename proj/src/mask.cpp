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

#include "promptbench/mask.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "promptbench/error.hpp"
#include "promptbench/kernels.hpp"

namespace promptbench {
namespace {

void check_dims(int width, int height, std::size_t n) {
  if (width < 1 || height < 1 || width > kMaxMaskSide || height > kMaxMaskSide) {
    fail(ErrorCode::kInvalidArgument,
         "mask dimensions " + std::to_string(width) + "x" + std::to_string(height));
  }
  if (n != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    fail(ErrorCode::kLengthMismatch, "grid has " + std::to_string(n) + " cells, expected " +
                                         std::to_string(width) + "x" + std::to_string(height));
  }
}

void require_foreground(const BinaryMask& mask) {
  if (mask.empty()) fail(ErrorCode::kEmptyMask);
}

}  // namespace

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width_, height_, bits_.size());
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
  foreground_ = kernels::count_nonzero(bits_);
}

BinaryMask BinaryMask::filled(int width, int height, bool value) {
  if (width < 1 || height < 1) fail(ErrorCode::kInvalidArgument, "empty dimensions");
  return BinaryMask(width, height,
                    std::vector<std::uint8_t>(static_cast<std::size_t>(width) *
                                                  static_cast<std::size_t>(height),
                                              value ? 1 : 0));
}

BinaryMask BinaryMask::from_points(int width, int height, std::span<const PixelPoint> fg) {
  if (width < 1 || height < 1) fail(ErrorCode::kInvalidArgument, "empty dimensions");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                                 0);
  for (const auto& p : fg) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      fail(ErrorCode::kInvalidArgument, "point outside mask");
    }
    bits[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) +
         static_cast<std::size_t>(p.x)] = 1;
  }
  return BinaryMask(width, height, std::move(bits));
}

LabelMask::LabelMask(int width, int height, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  check_dims(width_, height_, labels_.size());
}

BinaryMask binarize(const LabelMask& labels, std::span<const std::uint8_t> target_labels,
                    std::span<const std::uint8_t> label_set) {
  if (target_labels.empty()) fail(ErrorCode::kInvalidArgument, "no target labels");
  kernels::LabelTable table{};
  for (std::uint8_t t : target_labels) {
    if (std::find(label_set.begin(), label_set.end(), t) == label_set.end()) {
      fail(ErrorCode::kUnknownLabel, std::to_string(t));
    }
    table[t] = true;
  }
  std::vector<std::uint8_t> bits(labels.labels().size());
  kernels::label_membership(labels.labels(), table, bits);
  return BinaryMask(labels.width(), labels.height(), std::move(bits));
}

BBox tight_bbox(const BinaryMask& mask) {
  require_foreground(mask);
  BBox box{mask.width(), mask.height(), -1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      box.x_min = std::min(box.x_min, x);
      box.x_max = std::max(box.x_max, x);
      box.y_min = std::min(box.y_min, y);
      box.y_max = std::max(box.y_max, y);
    }
  }
  return box;
}

PixelPoint centroid(const BinaryMask& mask) {
  require_foreground(mask);
  std::uint64_t sum_x = 0;
  std::uint64_t sum_y = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) {
        sum_x += static_cast<std::uint64_t>(x);
        sum_y += static_cast<std::uint64_t>(y);
      }
    }
  }
  // round(sum / n) with halves rounded up, in exact integer arithmetic.
  const std::uint64_t n = mask.foreground_count();
  const PixelPoint mean{static_cast<int>((2 * sum_x + n) / (2 * n)),
                        static_cast<int>((2 * sum_y + n) / (2 * n))};
  if (mask.at(mean)) return mean;

  PixelPoint best = mean;
  std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const std::int64_t dx = x - mean.x;
      const std::int64_t dy = y - mean.y;
      const std::int64_t d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = {x, y};
      }
    }
  }
  return best;
}

std::array<BinaryMask, 4> quadrant_partition(const BinaryMask& mask) {
  const BBox box = tight_bbox(mask);
  const PixelPoint mid = box_center(box);
  std::array<std::vector<std::uint8_t>, 4> views;
  for (auto& v : views) v.assign(mask.size(), 0);
  for (int y = box.y_min; y <= box.y_max; ++y) {
    for (int x = box.x_min; x <= box.x_max; ++x) {
      if (!mask.at(x, y)) continue;
      const int q = (y > mid.y ? 2 : 0) + (x > mid.x ? 1 : 0);
      views[static_cast<std::size_t>(q)][mask.index(x, y)] = 1;
    }
  }
  return {BinaryMask(mask.width(), mask.height(), std::move(views[0])),
          BinaryMask(mask.width(), mask.height(), std::move(views[1])),
          BinaryMask(mask.width(), mask.height(), std::move(views[2])),
          BinaryMask(mask.width(), mask.height(), std::move(views[3]))};
}

}  // namespace promptbench
