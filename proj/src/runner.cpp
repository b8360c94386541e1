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

#include "promptbench/runner.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "promptbench/dataset.hpp"
#include "promptbench/error.hpp"
#include "promptbench/rng.hpp"
#include "promptbench/sampling.hpp"

namespace promptbench {
namespace {

using nlohmann::json;

bool is_skip(ErrorCode code) {
  return code == ErrorCode::kInsufficientForeground ||
         code == ErrorCode::kInsufficientBackground || code == ErrorCode::kEmptyMask;
}

struct TaskOutcome {
  EvalRecord record;
  std::vector<std::string> log;
};

std::string log_line(const char* event, const EvalRecord& r, const std::string& detail) {
  return json{{"event", event},
              {"patch", r.patch_id},
              {"strategy", r.strategy},
              {"draw", r.draw},
              {"detail", detail}}
      .dump();
}

TaskOutcome run_task(const EvalPatch& patch, const StrategySpec& spec, const std::string& strategy,
                     std::uint32_t draw, Segmenter& backend, std::uint64_t seed) {
  TaskOutcome out;
  EvalRecord& r = out.record;
  r.patch_id = patch.patch_id;
  r.patient_id = patch.patient_id;
  r.strategy = strategy;
  r.draw = draw;

  SeededRng rng = SeededRng::for_stream(seed, patch.patch_id, strategy, draw);
  std::vector<std::string> notes;
  Prompt prompt;
  try {
    prompt = build_prompt(spec, patch.gt, rng, &notes);
  } catch (const Error& e) {
    r.status = is_skip(e.code()) ? RecordStatus::kSkipped : RecordStatus::kFailed;
    r.reason = e.what();
    out.log.push_back(log_line(is_skip(e.code()) ? "skip" : "failure", r, r.reason));
    return out;
  }
  for (const auto& n : notes) out.log.push_back(log_line("note", r, n));
  r.positives = static_cast<std::uint32_t>(prompt.positive_count());
  r.negatives = static_cast<std::uint32_t>(prompt.negative_count());
  r.has_box = prompt.box.has_value();

  try {
    const BinaryMask pred =
        backend.segment(SegmentTask{patch.image, patch.image_path, prompt, &patch.gt});
    r.counts = confusion(pred, patch.gt);
  } catch (const Error& e) {
    r.status = RecordStatus::kFailed;
    r.reason = e.what();
    out.log.push_back(log_line("failure", r, r.reason));
  } catch (const std::exception& e) {
    r.status = RecordStatus::kFailed;
    r.reason = e.what();
    out.log.push_back(log_line("failure", r, r.reason));
  }
  return out;
}

}  // namespace

std::string_view status_name(RecordStatus status) {
  switch (status) {
    case RecordStatus::kOk: return "ok";
    case RecordStatus::kSkipped: return "skipped";
    case RecordStatus::kFailed: return "failed";
  }
  return "?";
}

RunResult evaluate(std::span<const EvalPatch> patches, std::span<const StrategySpec> strategies,
                   const BackendFactory& factory, const RunOptions& options) {
  if (strategies.empty()) fail(ErrorCode::kConfigError, "no strategies");
  if (options.workers < 1) fail(ErrorCode::kConfigError, "workers must be >= 1");
  if (options.draws < 1) fail(ErrorCode::kConfigError, "draws must be >= 1");

  std::vector<std::size_t> order(patches.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return patches[a].patch_id < patches[b].patch_id;
  });
  std::vector<std::string> names;
  for (const auto& s : strategies) names.push_back(s.canonical());

  const int workers = options.workers;
  std::vector<std::unique_ptr<Segmenter>> pool;
  for (int w = 0; w < workers; ++w) {
    try {
      pool.push_back(factory());
    } catch (const Error& e) {
      fail(ErrorCode::kBackendUnavailable, e.what());
    }
    if (!pool.back()) fail(ErrorCode::kBackendUnavailable, "factory returned no backend");
  }

  const std::size_t per_patch = strategies.size() * options.draws;
  const std::size_t total = patches.size() * per_patch;
  std::vector<TaskOutcome> outcomes(total);
  const auto started = std::chrono::steady_clock::now();

  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
#ifdef _OPENMP
    const int worker = omp_get_thread_num();
#else
    const int worker = 0;
#endif
    const auto task = static_cast<std::size_t>(t);
    const EvalPatch& patch = patches[order[task / per_patch]];
    const std::size_t s = (task % per_patch) / options.draws;
    const auto draw = static_cast<std::uint32_t>(task % options.draws);
    outcomes[task] = run_task(patch, strategies[s], names[s], draw,
                              *pool[static_cast<std::size_t>(worker)], options.global_seed);
  }

  const auto elapsed = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  RunResult result;
  result.records.reserve(total);
  std::size_t counts[3] = {0, 0, 0};
  for (auto& o : outcomes) {
    ++counts[static_cast<int>(o.record.status)];
    for (auto& line : o.log) result.log.push_back(std::move(line));
    result.records.push_back(std::move(o.record));
  }
  result.log.push_back(json{{"event", "summary"},
                            {"records", total},
                            {"ok", counts[0]},
                            {"skipped", counts[1]},
                            {"failed", counts[2]},
                            {"workers", workers},
                            {"wall_ms", elapsed}}
                           .dump());
  return result;
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const DatasetManifest manifest = load_manifest(config.manifest);
  std::vector<const ManifestEntry*> selected;
  if (config.evaluate_all) {
    for (const auto& e : manifest.entries) selected.push_back(&e);
  } else {
    const SplitAssignment split = config.split_file
                                      ? read_split(*config.split_file)
                                      : split_by_patient(manifest, config.train_fraction,
                                                         config.split_seed);
    for (const auto& e : manifest.entries) {
      if (split.test.count(e.patch_id)) selected.push_back(&e);
    }
  }

  std::vector<StrategySpec> strategies;
  for (const auto& s : config.strategies) strategies.push_back(StrategySpec::parse(s));
  const BackendSpec backend = BackendSpec::parse(config.backend);
  BackendOptions backend_options;
  backend_options.timeout = config.timeout;

  std::vector<std::optional<EvalPatch>> loaded(selected.size());
  std::vector<std::string> load_errors(selected.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(selected.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers) if (config.workers > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& e = *selected[static_cast<std::size_t>(i)];
    try {
      Patch p = load_patch(manifest, e.patch_id);
      loaded[static_cast<std::size_t>(i)] =
          EvalPatch{e.patch_id, e.patient_id, std::move(p.image), std::move(p.gt), e.image};
    } catch (const std::exception& ex) {
      load_errors[static_cast<std::size_t>(i)] = ex.what();
    }
  }

  std::vector<EvalPatch> patches;
  std::vector<EvalRecord> broken;
  std::vector<std::string> broken_log;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (loaded[i]) {
      patches.push_back(std::move(*loaded[i]));
      continue;
    }
    for (const auto& spec : strategies) {
      for (std::uint32_t d = 0; d < config.draws; ++d) {
        EvalRecord r;
        r.patch_id = selected[i]->patch_id;
        r.patient_id = selected[i]->patient_id;
        r.strategy = spec.canonical();
        r.draw = d;
        r.status = RecordStatus::kFailed;
        r.reason = load_errors[i];
        broken.push_back(std::move(r));
      }
    }
    broken_log.push_back(json{{"event", "load_failure"},
                              {"patch", selected[i]->patch_id},
                              {"detail", load_errors[i]}}
                             .dump());
  }

  RunOptions options;
  options.global_seed = config.global_seed;
  options.workers = config.workers;
  options.draws = config.draws;
  RunResult result = evaluate(
      patches, strategies, [&] { return make_backend(backend, backend_options); }, options);
  if (broken.empty()) return result;

  // Merge load failures back into canonical order.
  std::vector<std::string> names;
  for (const auto& s : strategies) names.push_back(s.canonical());
  auto rank = [&](const EvalRecord& r) {
    const auto pos = std::find(names.begin(), names.end(), r.strategy) - names.begin();
    return std::make_tuple(r.patch_id, pos, r.draw);
  };
  result.records.insert(result.records.end(), broken.begin(), broken.end());
  std::stable_sort(result.records.begin(), result.records.end(),
                   [&](const EvalRecord& a, const EvalRecord& b) { return rank(a) < rank(b); });
  result.log.insert(result.log.begin(), broken_log.begin(), broken_log.end());
  return result;
}

}  // namespace promptbench
