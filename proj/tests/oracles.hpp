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

// Test-side reference computations. Written as plain loops over pixels and
// kept independent of the library's own code paths.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "promptbench/mask.hpp"
#include "promptbench/raster.hpp"

namespace oracle {

using promptbench::BBox;
using promptbench::BinaryMask;
using promptbench::PixelPoint;

struct Counts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Counts count(const BinaryMask& pred, const BinaryMask& gt) {
  Counts c;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const bool p = pred.at(x, y);
      const bool g = gt.at(x, y);
      if (p && g) ++c.tp;
      if (p && !g) ++c.fp;
      if (!p && g) ++c.fn;
      if (!p && !g) ++c.tn;
    }
  }
  return c;
}

inline std::vector<PixelPoint> foreground(const BinaryMask& m) {
  std::vector<PixelPoint> out;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (m.at(x, y)) out.push_back({x, y});
    }
  }
  return out;
}

inline BBox bbox(const BinaryMask& m) {
  BBox b{m.width(), m.height(), -1, -1};
  for (const auto& p : foreground(m)) {
    b.x_min = std::min(b.x_min, p.x);
    b.y_min = std::min(b.y_min, p.y);
    b.x_max = std::max(b.x_max, p.x);
    b.y_max = std::max(b.y_max, p.y);
  }
  return b;
}

inline BinaryMask box_mask(int w, int h, const BBox& b) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  for (int y = b.y_min; y <= b.y_max; ++y) {
    for (int x = b.x_min; x <= b.x_max; ++x) bits[static_cast<std::size_t>(y * w + x)] = 1;
  }
  return BinaryMask(w, h, std::move(bits));
}

// Breadth-first 4-connected flood over |I(p) - I(seed)| <= tol.
inline std::vector<std::uint8_t> flood(const promptbench::Image& img, PixelPoint seed, int tol,
                                       const BBox& clip) {
  const int w = img.width;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * static_cast<std::size_t>(img.height), 0);
  const int ref = img.intensity(seed.x, seed.y);
  std::deque<PixelPoint> queue{seed};
  out[static_cast<std::size_t>(seed.y * w + seed.x)] = 1;
  while (!queue.empty()) {
    const PixelPoint p = queue.front();
    queue.pop_front();
    const PixelPoint next[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
    for (const auto& q : next) {
      if (!clip.contains(q)) continue;
      auto& seen = out[static_cast<std::size_t>(q.y * w + q.x)];
      if (seen) continue;
      if (std::abs(img.intensity(q.x, q.y) - ref) > tol) continue;
      seen = 1;
      queue.push_back(q);
    }
  }
  return out;
}

// Mask with roughly density * w * h foreground pixels placed independently.
inline BinaryMask random_mask(std::mt19937_64& gen, int w, int h, double density) {
  std::bernoulli_distribution fg(density);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (auto& b : bits) b = fg(gen) ? 1 : 0;
  return BinaryMask(w, h, std::move(bits));
}

// Random mask guaranteed to hold at least one foreground pixel. Mixes sparse
// speckle, dense noise and filled ellipses.
inline BinaryMask random_nonempty_mask(std::mt19937_64& gen, int max_side = 64) {
  std::uniform_int_distribution<int> side(1, max_side);
  const int w = side(gen);
  const int h = side(gen);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  switch (gen() % 3) {
    case 0: {
      std::bernoulli_distribution fg(0.02);
      for (auto& b : bits) b = fg(gen);
      break;
    }
    case 1: {
      std::bernoulli_distribution fg(0.5);
      for (auto& b : bits) b = fg(gen);
      break;
    }
    default: {
      std::uniform_real_distribution<double> u(0, 1);
      const double cx = u(gen) * w, cy = u(gen) * h;
      const double rx = 0.5 + u(gen) * w / 2.0, ry = 0.5 + u(gen) * h / 2.0;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double dx = (x - cx) / rx, dy = (y - cy) / ry;
          if (dx * dx + dy * dy <= 1.0) bits[static_cast<std::size_t>(y * w + x)] = 1;
        }
      }
    }
  }
  std::uniform_int_distribution<std::size_t> any(0, bits.size() - 1);
  bits[any(gen)] = 1;
  return BinaryMask(w, h, std::move(bits));
}

// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("promptbench-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle
