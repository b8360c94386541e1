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

#include "promptbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "promptbench/error.hpp"
#include "promptbench/rng.hpp"

namespace promptbench {
namespace {

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
  fail(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + why);
}

std::optional<std::uint8_t> parse_label_value(const std::string& s) {
  unsigned v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v > 255) return std::nullopt;
  return static_cast<std::uint8_t>(v);
}

}  // namespace

std::vector<std::uint8_t> DatasetManifest::label_values() const {
  std::vector<std::uint8_t> out;
  for (const auto& [name, value] : label_set) out.push_back(value);
  return out;
}

const ManifestEntry& DatasetManifest::entry(const std::string& patch_id) const {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const ManifestEntry& e) { return e.patch_id == patch_id; });
  if (it == entries.end()) fail(ErrorCode::kInvalidArgument, "unknown patch id " + patch_id);
  return *it;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kMissingFile, path.string());
  const auto base = path.parent_path();
  DatasetManifest m;
  std::vector<std::string> target_names;
  std::unordered_set<std::string> seen;
  std::string raw;
  std::size_t lineno = 0;
  bool header = false;
  bool columns = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = strip_cr(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kManifestHeader) parse_fail(lineno, "expected '" + std::string(kManifestHeader) + "'");
      header = true;
      continue;
    }
    const auto fields = split_on(line, '\t');
    if (!columns) {
      if (fields[0] == "labels" && fields.size() == 2) {
        for (const auto& item : split_on(fields[1], ',')) {
          const auto eq = item.find('=');
          const auto value = eq == std::string::npos ? std::nullopt
                                                     : parse_label_value(item.substr(eq + 1));
          if (!value || eq == 0) parse_fail(lineno, "bad label '" + item + "'");
          m.label_set.emplace_back(item.substr(0, eq), *value);
        }
      } else if (fields[0] == "target" && fields.size() == 2) {
        target_names = split_on(fields[1], ',');
      } else if (fields.size() == 4 && fields[0] == "patch_id" && fields[1] == "image" &&
                 fields[2] == "mask" && fields[3] == "patient_id") {
        columns = true;
      } else {
        parse_fail(lineno, "unexpected directive '" + fields[0] + "'");
      }
      continue;
    }
    if (fields.size() != 4) {
      parse_fail(lineno, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) parse_fail(lineno, "empty patch id");
    if (fields[3].empty()) parse_fail(lineno, "empty patient id");
    if (!seen.insert(fields[0]).second) fail(ErrorCode::kDuplicatePatchId, fields[0]);
    ManifestEntry e{fields[0], base / fields[1], base / fields[2], fields[3]};
    m.entries.push_back(std::move(e));
  }
  if (!header) parse_fail(lineno, "missing header");
  if (!columns) parse_fail(lineno, "missing column line");
  if (m.label_set.empty()) parse_fail(lineno, "missing labels directive");
  if (target_names.empty()) parse_fail(lineno, "missing target directive");
  for (const auto& t : target_names) {
    auto it = std::find_if(m.label_set.begin(), m.label_set.end(),
                           [&](const auto& l) { return l.first == t; });
    if (it != m.label_set.end()) {
      m.target_labels.push_back(it->second);
      continue;
    }
    const auto value = parse_label_value(t);
    const auto values = m.label_values();
    if (!value || std::find(values.begin(), values.end(), *value) == values.end()) {
      fail(ErrorCode::kUnknownLabel, t);
    }
    m.target_labels.push_back(*value);
  }
  for (const auto& e : m.entries) {
    if (!std::filesystem::exists(e.image)) fail(ErrorCode::kMissingFile, e.image.string());
    if (!std::filesystem::exists(e.mask)) fail(ErrorCode::kMissingFile, e.mask.string());
  }
  return m;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  const auto base = path.parent_path();
  auto rel = [&](const std::filesystem::path& p) {
    return p.is_absolute() && !base.empty() ? p.lexically_relative(base).generic_string()
                                            : p.generic_string();
  };
  out << kManifestHeader << '\n' << "labels\t";
  for (std::size_t i = 0; i < manifest.label_set.size(); ++i) {
    out << (i ? "," : "") << manifest.label_set[i].first << '='
        << static_cast<int>(manifest.label_set[i].second);
  }
  out << "\ntarget\t";
  for (std::size_t i = 0; i < manifest.target_labels.size(); ++i) {
    out << (i ? "," : "") << static_cast<int>(manifest.target_labels[i]);
  }
  out << "\npatch_id\timage\tmask\tpatient_id\n";
  for (const auto& e : manifest.entries) {
    out << e.patch_id << '\t' << rel(e.image) << '\t' << rel(e.mask) << '\t' << e.patient_id
        << '\n';
  }
  if (!out) fail(ErrorCode::kIoError, "short write to " + path.string());
}

Patch load_patch(const DatasetManifest& manifest, const std::string& patch_id) {
  const auto& e = manifest.entry(patch_id);
  Image image = read_image(e.image);
  const Image labels = read_image(e.mask);
  if (labels.channels != 1 || labels.max_value > 255) {
    fail(ErrorCode::kDecodeError, e.mask.string() + ": label mask must be 8-bit single channel");
  }
  if (labels.width != image.width || labels.height != image.height) {
    fail(ErrorCode::kDimensionMismatch,
         patch_id + ": image " + std::to_string(image.width) + "x" + std::to_string(image.height) +
             ", mask " + std::to_string(labels.width) + "x" + std::to_string(labels.height));
  }
  const auto values = manifest.label_values();
  std::array<bool, 256> known{};
  for (auto v : values) known[v] = true;
  std::vector<std::uint8_t> grid(labels.samples.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = static_cast<std::uint8_t>(labels.samples[i]);
    if (!known[grid[i]]) {
      fail(ErrorCode::kDecodeError,
           e.mask.string() + ": label " + std::to_string(grid[i]) + " not in label set");
    }
  }
  LabelMask lm(labels.width, labels.height, std::move(grid));
  BinaryMask gt = binarize(lm, manifest.target_labels, values);
  return {std::move(image), std::move(gt)};
}

SplitAssignment split_by_patient(const DatasetManifest& manifest, double train_fraction,
                                 std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "train fraction must be in (0,1)");
  }
  std::map<std::string, std::vector<std::string>> by_patient;
  for (const auto& e : manifest.entries) by_patient[e.patient_id].push_back(e.patch_id);
  if (by_patient.size() < 2) {
    fail(ErrorCode::kTooFewPatients, std::to_string(by_patient.size()));
  }
  std::vector<const std::string*> order;
  for (const auto& [patient, patches] : by_patient) order.push_back(&patient);
  SeededRng rng = SeededRng::for_stream(seed, "", "split");
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_below(i + 1)]);
  }

  const double target = train_fraction * static_cast<double>(manifest.entries.size());
  std::vector<const std::string*> train;
  std::vector<const std::string*> test;
  std::size_t train_count = 0;
  for (const auto* p : order) {
    if (static_cast<double>(train_count) < target) {
      train.push_back(p);
      train_count += by_patient[*p].size();
    } else {
      test.push_back(p);
    }
  }
  if (test.empty()) {
    std::size_t best = 0;
    double best_gap = INFINITY;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const double remaining = static_cast<double>(train_count - by_patient[*train[i]].size());
      const double gap = std::abs(remaining - target);
      if (gap <= best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    test.push_back(train[best]);
    train.erase(train.begin() + static_cast<std::ptrdiff_t>(best));
  }

  SplitAssignment split;
  split.seed = seed;
  split.train_fraction = train_fraction;
  for (const auto* p : train) split.train.insert(by_patient[*p].begin(), by_patient[*p].end());
  for (const auto* p : test) split.test.insert(by_patient[*p].begin(), by_patient[*p].end());
  return split;
}

void write_split(const SplitAssignment& split, const DatasetManifest& manifest,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  char frac[32];
  const auto end = std::to_chars(frac, frac + sizeof(frac), split.train_fraction).ptr;
  out << "promptbench-split v1\nseed\t" << split.seed << "\ntrain_fraction\t"
      << std::string_view(frac, static_cast<std::size_t>(end - frac))
      << "\npatch_id\tside\tpatient_id\n";
  for (const auto& e : manifest.entries) {
    const char* side = split.train.count(e.patch_id) ? "train" : "test";
    out << e.patch_id << '\t' << side << '\t' << e.patient_id << '\n';
  }
  if (!out) fail(ErrorCode::kIoError, "short write to " + path.string());
}

SplitAssignment read_split(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kMissingFile, path.string());
  SplitAssignment split;
  std::string raw;
  std::size_t lineno = 0;
  int stage = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = split_on(line, '\t');
    try {
      if (stage == 0) {
        if (line != "promptbench-split v1") parse_fail(lineno, "bad header");
        stage = 1;
      } else if (stage == 1 && fields.size() == 2 && fields[0] == "seed") {
        split.seed = std::stoull(fields[1]);
      } else if (stage == 1 && fields.size() == 2 && fields[0] == "train_fraction") {
        split.train_fraction = std::stod(fields[1]);
      } else if (stage == 1 && line == "patch_id\tside\tpatient_id") {
        stage = 2;
      } else if (stage == 2 && fields.size() == 3 && fields[1] == "train") {
        split.train.insert(fields[0]);
      } else if (stage == 2 && fields.size() == 3 && fields[1] == "test") {
        split.test.insert(fields[0]);
      } else {
        parse_fail(lineno, "unexpected line");
      }
    } catch (const std::logic_error&) {
      parse_fail(lineno, "bad number");
    }
  }
  if (stage != 2) parse_fail(lineno, "incomplete split file");
  return split;
}

DatasetManifest scan_layout(const std::filesystem::path& root, const std::string& layout,
                            std::vector<std::pair<std::string, std::uint8_t>> label_set,
                            std::vector<std::uint8_t> target_labels) {
  namespace fs = std::filesystem;
  DatasetManifest m;
  m.label_set = std::move(label_set);
  m.target_labels = std::move(target_labels);
  auto add_dir = [&](const fs::path& dir, const std::string& patient_override) {
    const fs::path images = dir / "images";
    const fs::path masks = dir / "masks";
    if (!fs::is_directory(images)) fail(ErrorCode::kMissingFile, images.string());
    std::vector<fs::path> files;
    for (const auto& f : fs::directory_iterator(images)) {
      if (f.is_regular_file()) files.push_back(f.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const fs::path mask = masks / f.filename();
      if (!fs::exists(mask)) fail(ErrorCode::kMissingFile, mask.string());
      const std::string stem = f.stem().string();
      std::string patient = patient_override;
      if (patient.empty()) {
        const auto parts = split_on(stem, '-');
        patient = parts.size() >= 3 ? parts[0] + "-" + parts[1] + "-" + parts[2] : stem;
      }
      const std::string id = patient_override.empty() ? stem : patient_override + "/" + stem;
      m.entries.push_back({id, f.lexically_relative(root), mask.lexically_relative(root), patient});
    }
  };
  if (layout == "bcss") {
    add_dir(root, "");
  } else if (layout == "brats") {
    std::vector<fs::path> patients;
    for (const auto& d : fs::directory_iterator(root)) {
      if (d.is_directory()) patients.push_back(d.path());
    }
    std::sort(patients.begin(), patients.end());
    for (const auto& p : patients) add_dir(p, p.filename().string());
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown layout '" + layout + "'");
  }
  return m;
}

}  // namespace promptbench
