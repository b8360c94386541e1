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

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "promptbench/mask.hpp"
#include "promptbench/raster.hpp"

namespace promptbench {

// Manifest file, tab-separated, '#' comments and blank lines ignored:
//
//   promptbench-manifest v1
//   labels<TAB>other=0,tumor=1,stroma=2
//   target<TAB>tumor
//   patch_id<TAB>image<TAB>mask<TAB>patient_id
//   p0001<TAB>images/p0001.png<TAB>masks/p0001.png<TAB>TCGA-A1-A0SK
//
// Relative paths resolve against the manifest's directory. target accepts
// label names or numeric values, comma-separated.
inline constexpr const char* kManifestHeader = "promptbench-manifest v1";

struct ManifestEntry {
  std::string patch_id;
  std::filesystem::path image;
  std::filesystem::path mask;
  std::string patient_id;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::pair<std::string, std::uint8_t>> label_set;
  std::vector<std::uint8_t> target_labels;

  std::vector<std::uint8_t> label_values() const;
  const ManifestEntry& entry(const std::string& patch_id) const;
};

// Throws ParseError("line N: ..."), MissingFile(path), DuplicatePatchId(id).
DatasetManifest load_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct Patch {
  Image image;
  BinaryMask gt;
};

// Decodes the image and label mask and binarizes the mask to the manifest's
// target labels. Throws DecodeError, DimensionMismatch.
Patch load_patch(const DatasetManifest& manifest, const std::string& patch_id);

struct SplitAssignment {
  std::set<std::string> train;
  std::set<std::string> test;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
};

// Patient-disjoint split. Patients (sorted by id, then shuffled with the seed)
// go to train until the train patch count reaches train_fraction * total; the
// rest go to test. If that leaves test empty, the train patient whose removal
// brings the train count closest to the target moves to test.
// Throws TooFewPatients when fewer than two distinct patients exist.
SplitAssignment split_by_patient(const DatasetManifest& manifest, double train_fraction,
                                 std::uint64_t seed);

void write_split(const SplitAssignment& split, const DatasetManifest& manifest,
                 const std::filesystem::path& path);
SplitAssignment read_split(const std::filesystem::path& path);

// Builds manifests from common directory layouts:
//  bcss:  <root>/images/<name>.<ext> and <root>/masks/<name>.<ext>; the
//         patient id is the first three dash-separated fields of <name>
//         (TCGA-XX-XXXX).
//  brats: <root>/<patient>/images/<name>.<ext> and
//         <root>/<patient>/masks/<name>.<ext>; the patient id is the
//         directory name.
// Paths in the result are relative to root.
DatasetManifest scan_layout(const std::filesystem::path& root, const std::string& layout,
                            std::vector<std::pair<std::string, std::uint8_t>> label_set,
                            std::vector<std::uint8_t> target_labels);

}  // namespace promptbench
