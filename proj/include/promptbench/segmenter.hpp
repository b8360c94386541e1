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

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "promptbench/mask.hpp"
#include "promptbench/prompt.hpp"
#include "promptbench/raster.hpp"

namespace promptbench {

// Everything a backend may look at for one call. ground_truth is a side
// channel used only by the Identity oracle; image_path is empty for images
// that exist only in memory.
struct SegmentTask {
  const Image& image;
  std::filesystem::path image_path;
  const Prompt& prompt;
  const BinaryMask* ground_truth = nullptr;
};

// A promptable segmenter. One instance serves one call at a time; callers
// that evaluate in parallel hold one instance per worker.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  // Returns a mask with the image's dimensions. Throws BackendCrashed,
  // ProtocolError, Timeout, DimensionMismatch.
  virtual BinaryMask segment(const SegmentTask& task) = 0;
  virtual std::string name() const = 0;
};

// Echoes the ground truth.
class IdentityOracle final : public Segmenter {
 public:
  BinaryMask segment(const SegmentTask& task) override;
  std::string name() const override { return "oracle:identity"; }
};

// Foreground is the prompt box interior (empty without a box).
class BoxFillOracle final : public Segmenter {
 public:
  BinaryMask segment(const SegmentTask& task) override;
  std::string name() const override { return "oracle:boxfill"; }
};

// Union of radius-r disks around positive points minus radius-r disks around
// negative points.
class PointDiskOracle final : public Segmenter {
 public:
  explicit PointDiskOracle(int radius);
  BinaryMask segment(const SegmentTask& task) override;
  std::string name() const override;

 private:
  int radius_;
};

// 4-connected flood fill from each positive point over pixels whose
// intensity is within tol of that seed's intensity, clipped to the prompt
// box when present. Regions grown from negative points are removed.
class RegionGrowOracle final : public Segmenter {
 public:
  explicit RegionGrowOracle(int tolerance);
  BinaryMask segment(const SegmentTask& task) override;
  std::string name() const override;

 private:
  int tolerance_;
};

// Backend spec strings:
//   oracle:identity | oracle:boxfill | oracle:pointdisk:r=R |
//   oracle:regiongrow:tol=T | external:<command line>
// The external command line is split on whitespace; single or double quotes
// group words.
struct BackendSpec {
  enum class Kind { kIdentity, kBoxFill, kPointDisk, kRegionGrow, kExternal };
  Kind kind = Kind::kIdentity;
  int parameter = 0;
  std::vector<std::string> command;

  static BackendSpec parse(const std::string& text);
  std::string canonical() const;
  bool is_oracle() const { return kind != Kind::kExternal; }
};

struct BackendOptions {
  std::chrono::milliseconds timeout{30000};
  std::vector<std::pair<std::string, std::string>> env;
};

// Creates a fresh backend instance. External backends are spawned and
// handshaken before this returns (SpawnFailed, HandshakeMismatch).
std::unique_ptr<Segmenter> make_backend(const BackendSpec& spec, const BackendOptions& options = {});

std::vector<std::string> split_command_line(const std::string& text);

}  // namespace promptbench
