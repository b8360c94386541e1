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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "promptbench/mask.hpp"
#include "promptbench/metrics.hpp"
#include "promptbench/prompt.hpp"
#include "promptbench/raster.hpp"
#include "promptbench/segmenter.hpp"

namespace promptbench {

// Config file: one "key = value" per line, '#' comments, TOML-style values
// (quoted strings, integers, floats, booleans, string arrays that may span
// lines). Keys:
//
//   manifest        path to the dataset manifest (relative to the config)
//   split_file      optional precomputed split; otherwise split_seed is used
//   split_seed      integer, default 0
//   train_fraction  default 0.8
//   evaluate        "test" (default) or "all"
//   global_seed     integer, default 0
//   backend         backend spec, e.g. "oracle:boxfill"
//   strategies      array of strategy strings
//   workers         default 1
//   timeout_ms      per-request timeout for external backends, default 30000
//   draws           prompt draws per (patch, strategy), default 1
struct ExperimentConfig {
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> split_file;
  std::uint64_t split_seed = 0;
  double train_fraction = 0.8;
  bool evaluate_all = false;
  std::uint64_t global_seed = 0;
  std::string backend = "oracle:identity";
  std::vector<std::string> strategies;
  int workers = 1;
  std::chrono::milliseconds timeout{30000};
  std::uint32_t draws = 1;

  // Throws ConfigError on any invalid field, including unparseable strategies.
  void validate() const;
};

// Throws ConfigError("line N: ...") or MissingFile.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

enum class RecordStatus { kOk, kSkipped, kFailed };

struct EvalRecord {
  std::string patch_id;
  std::string patient_id;
  std::string strategy;
  std::uint32_t draw = 0;
  RecordStatus status = RecordStatus::kOk;
  std::string reason;
  ConfusionCounts counts;
  std::uint32_t positives = 0;
  std::uint32_t negatives = 0;
  bool has_box = false;

  bool ok() const { return status == RecordStatus::kOk; }
  double dice() const { return dice_ratio(counts).value(); }
  double iou() const { return iou_ratio(counts).value(); }

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

std::string_view status_name(RecordStatus status);

// One patch held in memory for evaluation. image_path, when set, is what an
// external backend is told to read.
struct EvalPatch {
  std::string patch_id;
  std::string patient_id;
  Image image;
  BinaryMask gt;
  std::filesystem::path image_path;
};

struct RunOptions {
  std::uint64_t global_seed = 0;
  int workers = 1;
  std::uint32_t draws = 1;
};

struct RunResult {
  std::vector<EvalRecord> records;
  // Structured JSON lines: skips, failures, skipped quadrants, a summary.
  std::vector<std::string> log;
};

using BackendFactory = std::function<std::unique_ptr<Segmenter>()>;

// Evaluates every (patch, strategy, draw). Records come back sorted by patch
// id, then strategy position, then draw, whatever the worker count. Each
// worker owns one backend from the factory; the pool is built up front and a
// factory failure is reported as BackendUnavailable. Per-record failures never
// abort the run.
RunResult evaluate(std::span<const EvalPatch> patches, std::span<const StrategySpec> strategies,
                   const BackendFactory& factory, const RunOptions& options);

// Loads the manifest, selects the split, loads patches and evaluates. Patches
// that fail to load yield failed records for every strategy.
RunResult run_experiment(const ExperimentConfig& config);

// Records file: tab-separated with a version line and a header row. dice and
// iou are printed with 9 decimals; reading recomputes them from the counts.
inline constexpr const char* kRecordsHeader = "# promptbench-records v1";

void write_records(std::span<const EvalRecord> records, std::ostream& out);
void write_records(std::span<const EvalRecord> records, const std::filesystem::path& path);
// Throws ParseError("row N: ...") or IoError.
std::vector<EvalRecord> read_records(std::istream& in);
std::vector<EvalRecord> read_records(const std::filesystem::path& path);

}  // namespace promptbench
