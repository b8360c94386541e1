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

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace promptbench {

// Pixel coordinates: x is the column, y is the row, origin at the top-left.
struct PixelPoint {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const PixelPoint&, const PixelPoint&) = default;
};

// Inclusive pixel bounds, so a single pixel is BBox{x, y, x, y}.
struct BBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  constexpr int extent_x() const { return x_max - x_min + 1; }
  constexpr int extent_y() const { return y_max - y_min + 1; }
  constexpr bool contains(PixelPoint p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  constexpr bool contains(const BBox& o) const {
    return o.x_min >= x_min && o.x_max <= x_max && o.y_min >= y_min && o.y_max <= y_max;
  }
  constexpr bool valid_in(int width, int height) const {
    return x_min >= 0 && y_min >= 0 && x_min <= x_max && y_min <= y_max && x_max < width &&
           y_max < height;
  }

  friend constexpr bool operator==(const BBox&, const BBox&) = default;
};

inline constexpr int kMaxMaskSide = 8192;

// Row-major foreground/background grid. Immutable once constructed; the
// foreground count is computed at construction.
class BinaryMask {
 public:
  // bits.size() must equal width*height; any nonzero byte is foreground.
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  static BinaryMask filled(int width, int height, bool value);
  static BinaryMask from_points(int width, int height, std::span<const PixelPoint> fg);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }
  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  bool at(PixelPoint p) const { return at(p.x, p.y); }
  bool in_bounds(PixelPoint p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  std::span<const std::uint8_t> bits() const { return bits_; }

  std::size_t foreground_count() const { return foreground_; }
  std::size_t background_count() const { return bits_.size() - foreground_; }
  bool empty() const { return foreground_ == 0; }

  friend bool operator==(const BinaryMask& a, const BinaryMask& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.bits_ == b.bits_;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
  std::size_t foreground_;
};

class LabelMask {
 public:
  LabelMask(int width, int height, std::vector<std::uint8_t> labels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  std::span<const std::uint8_t> labels() const { return labels_; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> labels_;
};

// Foreground where the label is one of target_labels. Throws UnknownLabel if a
// target is not in label_set, InvalidArgument if target_labels is empty.
BinaryMask binarize(const LabelMask& labels, std::span<const std::uint8_t> target_labels,
                    std::span<const std::uint8_t> label_set);

// Smallest box holding every foreground pixel. Throws EmptyMask.
BBox tight_bbox(const BinaryMask& mask);

// Rounded mean foreground coordinate, snapped to the nearest foreground pixel
// (Euclidean, ties to the first in row-major order) when it lands on
// background. Throws EmptyMask.
PixelPoint centroid(const BinaryMask& mask);

// Splits tight_bbox(mask) at floor midpoints into top-left, top-right,
// bottom-left, bottom-right views. Column mid_x and row mid_y belong to the
// left/top halves. Throws EmptyMask.
std::array<BinaryMask, 4> quadrant_partition(const BinaryMask& mask);

constexpr PixelPoint box_center(const BBox& box) {
  return {(box.x_min + box.x_max) / 2, (box.y_min + box.y_max) / 2};
}

}  // namespace promptbench
