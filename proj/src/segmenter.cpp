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

#include "promptbench/segmenter.hpp"

#include <charconv>
#include <cstdlib>

#include "promptbench/error.hpp"
#include "promptbench/external.hpp"

namespace promptbench {
namespace {

std::vector<std::uint8_t> blank(const Image& image) {
  return std::vector<std::uint8_t>(
      static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height), 0);
}

void stamp_disk(std::vector<std::uint8_t>& bits, int width, int height, PixelPoint c, int r,
                std::uint8_t value) {
  for (int y = std::max(0, c.y - r); y <= std::min(height - 1, c.y + r); ++y) {
    for (int x = std::max(0, c.x - r); x <= std::min(width - 1, c.x + r); ++x) {
      const int dx = x - c.x;
      const int dy = y - c.y;
      if (dx * dx + dy * dy <= r * r) {
        bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
             static_cast<std::size_t>(x)] = value;
      }
    }
  }
}

// Marks into region every pixel reachable from seed whose intensity is within
// tol of the seed's, staying inside clip. stamp/generation mark visited pixels
// without clearing between seeds.
void flood(const Image& image, PixelPoint seed, int tol, const BBox& clip,
           std::vector<std::uint8_t>& region, std::vector<std::uint32_t>& stamp,
           std::uint32_t generation) {
  if (!clip.contains(seed)) return;
  const int w = image.width;
  auto idx = [w](int x, int y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
  };
  const int ref = image.intensity(seed.x, seed.y);
  std::vector<PixelPoint> stack{seed};
  stamp[idx(seed.x, seed.y)] = generation;
  while (!stack.empty()) {
    const PixelPoint p = stack.back();
    stack.pop_back();
    region[idx(p.x, p.y)] = 1;
    static constexpr int kDx[4] = {1, -1, 0, 0};
    static constexpr int kDy[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const PixelPoint n{p.x + kDx[d], p.y + kDy[d]};
      if (!clip.contains(n) || stamp[idx(n.x, n.y)] == generation) continue;
      if (std::abs(image.intensity(n.x, n.y) - ref) > tol) continue;
      stamp[idx(n.x, n.y)] = generation;
      stack.push_back(n);
    }
  }
}

int parse_param(const std::string& text, const std::string& key) {
  const std::string prefix = key + "=";
  if (text.rfind(prefix, 0) != 0) fail(ErrorCode::kConfigError, "expected " + prefix + "N");
  int v = 0;
  const char* begin = text.data() + prefix.size();
  const char* end = text.data() + text.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || v < 1) {
    fail(ErrorCode::kConfigError, "bad " + key + " in '" + text + "'");
  }
  return v;
}

}  // namespace

BinaryMask IdentityOracle::segment(const SegmentTask& task) {
  if (!task.ground_truth) fail(ErrorCode::kProtocolError, "identity oracle needs ground truth");
  return *task.ground_truth;
}

BinaryMask BoxFillOracle::segment(const SegmentTask& task) {
  auto bits = blank(task.image);
  if (task.prompt.box) {
    const BBox& b = *task.prompt.box;
    for (int y = b.y_min; y <= b.y_max; ++y) {
      for (int x = b.x_min; x <= b.x_max; ++x) {
        bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(task.image.width) +
             static_cast<std::size_t>(x)] = 1;
      }
    }
  }
  return BinaryMask(task.image.width, task.image.height, std::move(bits));
}

PointDiskOracle::PointDiskOracle(int radius) : radius_(radius) {
  if (radius < 1) fail(ErrorCode::kInvalidArgument, "disk radius must be positive");
}

std::string PointDiskOracle::name() const { return "oracle:pointdisk:r=" + std::to_string(radius_); }

BinaryMask PointDiskOracle::segment(const SegmentTask& task) {
  auto bits = blank(task.image);
  for (const auto& p : task.prompt.points) {
    if (p.polarity == Polarity::kPositive) {
      stamp_disk(bits, task.image.width, task.image.height, p.point, radius_, 1);
    }
  }
  for (const auto& p : task.prompt.points) {
    if (p.polarity == Polarity::kNegative) {
      stamp_disk(bits, task.image.width, task.image.height, p.point, radius_, 0);
    }
  }
  return BinaryMask(task.image.width, task.image.height, std::move(bits));
}

RegionGrowOracle::RegionGrowOracle(int tolerance) : tolerance_(tolerance) {
  if (tolerance < 1) fail(ErrorCode::kInvalidArgument, "tolerance must be positive");
}

std::string RegionGrowOracle::name() const {
  return "oracle:regiongrow:tol=" + std::to_string(tolerance_);
}

BinaryMask RegionGrowOracle::segment(const SegmentTask& task) {
  const BBox clip = task.prompt.box.value_or(BBox{0, 0, task.image.width - 1, task.image.height - 1});
  auto grown = blank(task.image);
  auto removed = blank(task.image);
  std::vector<std::uint32_t> stamp(grown.size(), 0);
  std::uint32_t generation = 0;
  for (const auto& p : task.prompt.points) {
    flood(task.image, p.point, tolerance_, clip,
          p.polarity == Polarity::kPositive ? grown : removed, stamp, ++generation);
  }
  for (std::size_t i = 0; i < grown.size(); ++i) grown[i] &= static_cast<std::uint8_t>(removed[i] ^ 1);
  return BinaryMask(task.image.width, task.image.height, std::move(grown));
}

std::vector<std::string> split_command_line(const std::string& text) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char c : text) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
    } else if (c == ' ' || c == '\t') {
      if (in_word) words.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (quote) fail(ErrorCode::kConfigError, "unterminated quote in command line");
  if (in_word) words.push_back(std::move(cur));
  return words;
}

BackendSpec BackendSpec::parse(const std::string& text) {
  BackendSpec spec;
  if (text == "oracle:identity") {
    spec.kind = Kind::kIdentity;
  } else if (text == "oracle:boxfill") {
    spec.kind = Kind::kBoxFill;
  } else if (text.rfind("oracle:pointdisk:", 0) == 0) {
    spec.kind = Kind::kPointDisk;
    spec.parameter = parse_param(text.substr(17), "r");
  } else if (text.rfind("oracle:regiongrow:", 0) == 0) {
    spec.kind = Kind::kRegionGrow;
    spec.parameter = parse_param(text.substr(18), "tol");
  } else if (text.rfind("external:", 0) == 0) {
    spec.kind = Kind::kExternal;
    spec.command = split_command_line(text.substr(9));
    if (spec.command.empty()) fail(ErrorCode::kConfigError, "empty external command");
  } else {
    fail(ErrorCode::kConfigError, "unknown backend '" + text + "'");
  }
  return spec;
}

std::string BackendSpec::canonical() const {
  switch (kind) {
    case Kind::kIdentity: return "oracle:identity";
    case Kind::kBoxFill: return "oracle:boxfill";
    case Kind::kPointDisk: return "oracle:pointdisk:r=" + std::to_string(parameter);
    case Kind::kRegionGrow: return "oracle:regiongrow:tol=" + std::to_string(parameter);
    case Kind::kExternal: {
      std::string out = "external:";
      for (std::size_t i = 0; i < command.size(); ++i) out += (i ? " " : "") + command[i];
      return out;
    }
  }
  return {};
}

std::unique_ptr<Segmenter> make_backend(const BackendSpec& spec, const BackendOptions& options) {
  switch (spec.kind) {
    case BackendSpec::Kind::kIdentity: return std::make_unique<IdentityOracle>();
    case BackendSpec::Kind::kBoxFill: return std::make_unique<BoxFillOracle>();
    case BackendSpec::Kind::kPointDisk: return std::make_unique<PointDiskOracle>(spec.parameter);
    case BackendSpec::Kind::kRegionGrow: return std::make_unique<RegionGrowOracle>(spec.parameter);
    case BackendSpec::Kind::kExternal: return spawn_external(spec.command, options);
  }
  fail(ErrorCode::kConfigError, "unknown backend kind");
}

}  // namespace promptbench
