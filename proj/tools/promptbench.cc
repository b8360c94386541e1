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
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "promptbench/dataset.hpp"
#include "promptbench/error.hpp"
#include "promptbench/external.hpp"
#include "promptbench/report.hpp"
#include "promptbench/rng.hpp"
#include "promptbench/runner.hpp"
#include "promptbench/sampling.hpp"
#include "promptbench/synth.hpp"

#ifndef PROMPTBENCH_TRANSCRIPT_DIR
#define PROMPTBENCH_TRANSCRIPT_DIR "tests/fixtures/protocol/boxfill"
#endif

namespace fs = std::filesystem;
namespace pb = promptbench;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) pb::fail(pb::ErrorCode::kMissingFile, path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) pb::fail(pb::ErrorCode::kIoError, path.string());
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.' && c != '_') c = '_';
  }
  return s;
}

// "name=v,name=v"
std::vector<std::pair<std::string, std::uint8_t>> parse_labels(const std::string& text) {
  std::vector<std::pair<std::string, std::uint8_t>> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) pb::fail(pb::ErrorCode::kInvalidArgument, "label '" + item + "'");
    const int v = std::stoi(item.substr(eq + 1));
    if (v < 0 || v > 255) pb::fail(pb::ErrorCode::kInvalidArgument, "label value " + item);
    out.emplace_back(item.substr(0, eq), static_cast<std::uint8_t>(v));
  }
  return out;
}

std::vector<std::uint8_t> parse_targets(const std::string& text,
                                        const std::vector<std::pair<std::string, std::uint8_t>>& labels) {
  std::vector<std::uint8_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto it = std::find_if(labels.begin(), labels.end(), [&](const auto& l) { return l.first == item; });
    if (it != labels.end()) {
      out.push_back(it->second);
    } else {
      out.push_back(static_cast<std::uint8_t>(std::stoi(item)));
    }
  }
  return out;
}

// ---- split

struct SplitArgs {
  fs::path manifest;
  fs::path out;
  double fraction = 0.8;
  std::uint64_t seed = 0;
};

int cmd_split(const SplitArgs& a) {
  const auto manifest = pb::load_manifest(a.manifest);
  const auto split = pb::split_by_patient(manifest, a.fraction, a.seed);
  pb::write_split(split, manifest, a.out);
  std::cout << "train " << split.train.size() << " test " << split.test.size() << " -> "
            << a.out.string() << "\n";
  return 0;
}

// ---- sample

struct SampleArgs {
  fs::path manifest;
  std::string strategy;
  std::vector<std::string> patches;
  std::uint64_t seed = 0;
  std::uint32_t draw = 0;
  fs::path out_dir = "overlays";
};

int cmd_sample(const SampleArgs& a) {
  const auto manifest = pb::load_manifest(a.manifest);
  const auto spec = pb::StrategySpec::parse(a.strategy);
  const std::string name = spec.canonical();
  std::vector<std::string> ids = a.patches;
  if (ids.empty()) {
    for (const auto& e : manifest.entries) ids.push_back(e.patch_id);
  }
  fs::create_directories(a.out_dir);
  for (const auto& id : ids) {
    const auto patch = pb::load_patch(manifest, id);
    auto rng = pb::SeededRng::for_stream(a.seed, id, name, a.draw);
    try {
      const auto prompt = pb::build_prompt(spec, patch.gt, rng);
      const fs::path out = a.out_dir / (file_safe(id) + "__" + file_safe(name) + ".png");
      pb::render_overlay(patch.image, prompt, patch.gt, out);
      std::cout << id << "\t+" << prompt.positive_count() << "\t-" << prompt.negative_count()
                << "\t" << (prompt.box ? "box" : "nobox") << "\t" << out.string() << "\n";
    } catch (const pb::Error& e) {
      std::cout << id << "\tskipped\t" << e.what() << "\n";
    }
  }
  return 0;
}

// ---- run

struct RunArgs {
  fs::path config;
  std::string backend;
  int workers = 0;
  std::uint32_t draws = 0;
  std::optional<std::uint64_t> seed;
  fs::path out = "records.tsv";
  fs::path log;
};

int cmd_run(const RunArgs& a) {
  auto config = pb::load_config(a.config);
  if (!a.backend.empty()) config.backend = a.backend;
  if (a.workers > 0) config.workers = a.workers;
  if (a.draws > 0) config.draws = a.draws;
  if (a.seed) config.global_seed = *a.seed;
  const auto result = pb::run_experiment(config);
  pb::write_records(result.records, a.out);
  if (!a.log.empty()) {
    std::string text;
    for (const auto& line : result.log) text += line + "\n";
    write_text(a.log, text);
  }
  std::cout << result.log.back() << "\n";
  return 0;
}

// ---- report

struct ReportArgs {
  std::vector<std::string> records;
  std::string format = "md";
  fs::path out;
  bool per_patient = false;
  fs::path effort;
  fs::path scatter_csv;
  fs::path scatter_svg;
  fs::path boxplot_svg;
};

// path[:tag]; the tag defaults to the file stem.
std::pair<fs::path, std::string> records_arg(const std::string& arg) {
  const auto colon = arg.rfind(':');
  if (colon != std::string::npos && colon > 0 && arg.find('/', colon) == std::string::npos &&
      colon + 1 < arg.size()) {
    return {arg.substr(0, colon), arg.substr(colon + 1)};
  }
  return {arg, fs::path(arg).stem().string()};
}

int cmd_report(const ReportArgs& a) {
  const auto aggregation = a.per_patient ? pb::Aggregation::kPatient : pb::Aggregation::kPatch;
  std::vector<pb::SummaryRow> rows;
  std::vector<std::string> datasets;
  for (const auto& arg : a.records) {
    const auto [path, tag] = records_arg(arg);
    const auto records = pb::read_records(path);
    auto part = pb::summarize(records, tag, aggregation);
    rows.insert(rows.end(), part.begin(), part.end());
    datasets.push_back(tag);
  }
  const std::string table = a.format == "csv" ? pb::render_summary_csv(rows) : pb::render_markdown(rows);
  if (a.out.empty()) {
    std::cout << table;
  } else {
    write_text(a.out, table);
  }

  if (a.scatter_csv.empty() && a.scatter_svg.empty() && a.boxplot_svg.empty()) return 0;
  const auto effort = a.effort.empty() ? pb::EffortMap::defaults() : pb::EffortMap::parse(read_text(a.effort));
  // Per-dataset deviations, each against its own grand mean.
  std::vector<pb::ScatterPoint> points;
  for (const auto& ds : datasets) {
    std::vector<pb::SummaryRow> mine;
    for (const auto& r : rows) {
      if (r.dataset == ds) mine.push_back(r);
    }
    auto p = pb::scatter_data(mine, effort);
    points.insert(points.end(), p.begin(), p.end());
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& x, const auto& y) { return x.effort < y.effort; });
  if (!a.scatter_csv.empty()) {
    write_text(a.scatter_csv, pb::render_scatter_csv(points));
    if (datasets.size() > 1) {
      // Every (strategy, dataset) row pooled against one grand mean.
      fs::path combined = a.scatter_csv;
      combined.replace_extension(".combined.csv");
      write_text(combined, pb::render_scatter_csv(pb::scatter_data(rows, effort)));
    }
  }
  if (!a.scatter_svg.empty()) {
    write_text(a.scatter_svg, pb::render_scatter_svg(points, "Dice change to the average vs effort"));
  }
  if (!a.boxplot_svg.empty()) {
    write_text(a.boxplot_svg, pb::render_boxplot_svg(rows, "Dice per strategy"));
  }
  return 0;
}

// ---- protocol-check

struct CheckArgs {
  std::string cmd;
  fs::path transcripts = PROMPTBENCH_TRANSCRIPT_DIR;
  int timeout_ms = 5000;
};

struct Exchange {
  std::size_t line = 0;
  std::string send;
  std::string expect;
};

// Error messages are free text; error records match on type and id alone.
bool same_error(const std::string& got, const std::string& expect) {
  const auto g = nlohmann::json::parse(got, nullptr, false);
  const auto e = nlohmann::json::parse(expect, nullptr, false);
  if (!g.is_object() || !e.is_object()) return false;
  if (e.value("type", "") != "error" || g.value("type", "") != "error") return false;
  if (!g.contains("message") || !g["message"].is_string()) return false;
  return g.contains("id") && g["id"] == e["id"];
}

// Transcript lines: "< " adapter output, "> " harness input, "#" comments.
// The first record is the adapter's hello.
std::string check_transcript(const fs::path& path, const std::vector<std::string>& argv,
                             std::chrono::milliseconds timeout) {
  std::ifstream in(path);
  std::string hello;
  std::vector<Exchange> steps;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    if (line.size() < 2 || line[1] != ' ' || (line[0] != '<' && line[0] != '>')) {
      return "line " + std::to_string(n) + ": malformed transcript line";
    }
    const std::string body = line.substr(2);
    if (line[0] == '>') {
      steps.push_back({n, body, {}});
    } else if (hello.empty() && steps.empty()) {
      hello = body;
    } else if (!steps.empty() && steps.back().expect.empty()) {
      steps.back().expect = body;
    } else {
      return "line " + std::to_string(n) + ": reply without request";
    }
  }
  if (hello.empty()) return "transcript has no hello line";

  pb::BackendOptions options;
  options.timeout = timeout;
  std::unique_ptr<pb::ExternalSegmenter> adapter;
  try {
    adapter = pb::spawn_external(argv, options);
  } catch (const pb::Error& e) {
    return std::string("handshake: ") + e.what();
  }
  if (adapter->hello_line() != hello) {
    return "hello: expected " + hello + " got " + adapter->hello_line();
  }
  for (const auto& s : steps) {
    std::string got;
    try {
      got = adapter->exchange(s.send);
    } catch (const pb::Error& e) {
      return "line " + std::to_string(s.line) + ": " + e.what();
    }
    if (got != s.expect && !same_error(got, s.expect)) {
      return "line " + std::to_string(s.line) + ": expected " + s.expect + " got " + got;
    }
  }
  return {};
}

int cmd_protocol_check(const CheckArgs& a) {
  const auto argv = pb::split_command_line(a.cmd);
  if (argv.empty()) pb::fail(pb::ErrorCode::kInvalidArgument, "--cmd is empty");
  std::vector<fs::path> files;
  if (fs::is_regular_file(a.transcripts)) {
    files.push_back(a.transcripts);
  } else if (fs::is_directory(a.transcripts)) {
    for (const auto& e : fs::directory_iterator(a.transcripts)) {
      if (e.path().extension() == ".txt") files.push_back(e.path());
    }
  } else {
    pb::fail(pb::ErrorCode::kMissingFile, a.transcripts.string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) pb::fail(pb::ErrorCode::kMissingFile, "no transcripts in " + a.transcripts.string());
  int failed = 0;
  for (const auto& f : files) {
    const std::string problem = check_transcript(f, argv, std::chrono::milliseconds(a.timeout_ms));
    if (problem.empty()) {
      std::cout << "PASS " << f.filename().string() << "\n";
    } else {
      std::cout << "FAIL " << f.filename().string() << ": " << problem << "\n";
      ++failed;
    }
  }
  std::cout << (failed ? "protocol-check: FAIL" : "protocol-check: pass") << " (" << files.size() - failed
            << "/" << files.size() << ")\n";
  return failed ? 1 : 0;
}

// ---- make-manifest

struct ManifestArgs {
  fs::path root;
  std::string layout = "bcss";
  std::string labels;
  std::string target;
  fs::path out;
};

int cmd_make_manifest(const ManifestArgs& a) {
  const auto labels = parse_labels(a.labels);
  auto manifest = pb::scan_layout(a.root, a.layout, labels, parse_targets(a.target, labels));
  const fs::path out = a.out.empty() ? a.root / "manifest.tsv" : a.out;
  const fs::path out_dir = fs::absolute(out).parent_path();
  for (auto& e : manifest.entries) {
    e.image = fs::absolute(a.root / e.image).lexically_relative(out_dir);
    e.mask = fs::absolute(a.root / e.mask).lexically_relative(out_dir);
  }
  pb::write_manifest(manifest, out);
  std::cout << manifest.entries.size() << " patches -> " << out.string() << "\n";
  return 0;
}

// ---- synth

struct SynthArgs {
  fs::path out_dir;
  std::string family = "coarse";
  int count = 100;
  int size = 128;
  std::uint64_t seed = 0;
  int per_patient = 1;
};

int cmd_synth(const SynthArgs& a) {
  const auto morphology = a.family == "fine" ? pb::synth::Morphology::kFine : pb::synth::Morphology::kCoarse;
  const auto patches = pb::synth::make_dataset(morphology, a.count, a.size, a.seed, a.per_patient);
  const auto manifest = pb::synth::write_dataset(patches, a.out_dir);
  std::cout << patches.size() << " patches -> " << manifest.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"promptbench: prompt strategy benchmark for promptable segmenters"};
  app.require_subcommand(1);

  SplitArgs split;
  auto* s = app.add_subcommand("split", "patient-disjoint train/test split of a manifest");
  s->add_option("--manifest", split.manifest, "manifest file")->required()->check(CLI::ExistingFile);
  s->add_option("--out", split.out, "split file to write")->required();
  s->add_option("--fraction", split.fraction, "target train fraction")->check(CLI::Range(0.0, 1.0));
  s->add_option("--seed", split.seed, "shuffle seed");

  SampleArgs sample;
  auto* sm = app.add_subcommand("sample", "render prompt overlays for one strategy");
  sm->add_option("--manifest", sample.manifest, "manifest file")->required()->check(CLI::ExistingFile);
  sm->add_option("--strategy", sample.strategy, "strategy, e.g. points+box:k=10")->required();
  sm->add_option("--patch", sample.patches, "patch id (repeatable; default all)");
  sm->add_option("--seed", sample.seed, "global seed");
  sm->add_option("--draw", sample.draw, "draw index");
  sm->add_option("--out-dir", sample.out_dir, "output directory");

  RunArgs run;
  auto* r = app.add_subcommand("run", "evaluate a strategy grid and write records");
  r->add_option("--config", run.config, "experiment config")->required()->check(CLI::ExistingFile);
  r->add_option("--backend", run.backend, "override backend spec");
  r->add_option("--workers", run.workers, "override worker count")->check(CLI::PositiveNumber);
  r->add_option("--draws", run.draws, "override prompt draws per patch")->check(CLI::PositiveNumber);
  r->add_option("--seed", run.seed, "override global seed");
  r->add_option("--out", run.out, "records file");
  r->add_option("--log", run.log, "run log (JSON lines)");

  ReportArgs report;
  auto* rp = app.add_subcommand("report", "summary tables and plot data from records");
  rp->add_option("--records", report.records, "records file, optionally path:dataset")->required();
  rp->add_option("--format", report.format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  rp->add_option("--out", report.out, "table output (default stdout)");
  rp->add_flag("--per-patient", report.per_patient, "average per patient first");
  rp->add_option("--effort", report.effort, "effort scores file")->check(CLI::ExistingFile);
  rp->add_option("--scatter-csv", report.scatter_csv, "effort vs dice-change CSV");
  rp->add_option("--scatter-svg", report.scatter_svg, "effort vs dice-change SVG");
  rp->add_option("--boxplot-svg", report.boxplot_svg, "dice boxplot SVG");

  CheckArgs check;
  auto* pc = app.add_subcommand("protocol-check", "replay golden transcripts against an adapter");
  pc->add_option("--cmd", check.cmd, "adapter command line")->required();
  pc->add_option("--transcripts", check.transcripts, "transcript file or directory");
  pc->add_option("--timeout-ms", check.timeout_ms, "per-reply timeout")->check(CLI::PositiveNumber);

  ManifestArgs mm;
  auto* m = app.add_subcommand("make-manifest", "build a manifest from a bcss or brats tree");
  m->add_option("--root", mm.root, "dataset root")->required()->check(CLI::ExistingDirectory);
  m->add_option("--layout", mm.layout, "bcss or brats")->check(CLI::IsMember({"bcss", "brats"}));
  m->add_option("--labels", mm.labels, "name=value,...")->required();
  m->add_option("--target", mm.target, "target label names or values")->required();
  m->add_option("--out", mm.out, "manifest path (default <root>/manifest.tsv)");

  SynthArgs syn;
  auto* sy = app.add_subcommand("synth", "write a synthetic dataset");
  sy->add_option("--out-dir", syn.out_dir, "output directory")->required();
  sy->add_option("--family", syn.family, "coarse or fine")->check(CLI::IsMember({"coarse", "fine"}));
  sy->add_option("--count", syn.count, "patches")->check(CLI::PositiveNumber);
  sy->add_option("--size", syn.size, "patch side")->check(CLI::Range(16, 4096));
  sy->add_option("--seed", syn.seed, "seed");
  sy->add_option("--per-patient", syn.per_patient, "patches per patient")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*s) return cmd_split(split);
    if (*sm) return cmd_sample(sample);
    if (*r) return cmd_run(run);
    if (*rp) return cmd_report(report);
    if (*pc) return cmd_protocol_check(check);
    if (*m) return cmd_make_manifest(mm);
    if (*sy) return cmd_synth(syn);
  } catch (const pb::Error& e) {
    std::cerr << nlohmann::json{{"error", std::string(pb::error_name(e.code()))}, {"detail", e.detail()}}.dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "Internal"}, {"detail", e.what()}}.dump() << "\n";
    return 1;
  }
  return 1;
}
