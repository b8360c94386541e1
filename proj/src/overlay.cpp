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

#include <algorithm>

#include "promptbench/error.hpp"
#include "promptbench/report.hpp"

namespace promptbench {

Image render_overlay(const Image& image, const Prompt& prompt, const BinaryMask& gt) {
  if (gt.width() != image.width || gt.height() != image.height) {
    fail(ErrorCode::kDimensionMismatch, "overlay mask does not match image");
  }
  validate_prompt(prompt, image.width, image.height);
  const int w = image.width;
  const int h = image.height;
  std::vector<std::uint16_t> rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  auto put = [&](int x, int y, const std::uint8_t (&c)[3]) {
    const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                           static_cast<std::size_t>(x)) * 3;
    rgb[i] = c[0];
    rgb[i + 1] = c[1];
    rgb[i + 2] = c[2];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto v = static_cast<std::uint8_t>(image.intensity(x, y) * 255 / std::max<int>(1, image.max_value));
      const std::uint8_t g[3] = {v, v, v};
      put(x, y, g);
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!gt.at(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x == w - 1 || y == h - 1 || !gt.at(x - 1, y) ||
                        !gt.at(x + 1, y) || !gt.at(x, y - 1) || !gt.at(x, y + 1);
      if (edge) put(x, y, OverlayColors::kContour);
    }
  }
  if (prompt.box) {
    const BBox& b = *prompt.box;
    for (int x = b.x_min; x <= b.x_max; ++x) {
      put(x, b.y_min, OverlayColors::kBox);
      put(x, b.y_max, OverlayColors::kBox);
    }
    for (int y = b.y_min; y <= b.y_max; ++y) {
      put(b.x_min, y, OverlayColors::kBox);
      put(b.x_max, y, OverlayColors::kBox);
    }
  }
  for (const auto& p : prompt.points) {
    const auto& color =
        p.polarity == Polarity::kPositive ? OverlayColors::kPositive : OverlayColors::kNegative;
    for (int y = std::max(0, p.point.y - kMarkerRadius);
         y <= std::min(h - 1, p.point.y + kMarkerRadius); ++y) {
      for (int x = std::max(0, p.point.x - kMarkerRadius);
           x <= std::min(w - 1, p.point.x + kMarkerRadius); ++x) {
        put(x, y, color);
      }
    }
  }
  return Image::rgb(w, h, std::move(rgb));
}

void render_overlay(const Image& image, const Prompt& prompt, const BinaryMask& gt,
                    const std::filesystem::path& out) {
  write_image(render_overlay(image, prompt, gt), out);
}

}  // namespace promptbench
