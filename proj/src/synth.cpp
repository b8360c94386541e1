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

#include "promptbench/synth.hpp"

#include <cmath>
#include <cstdio>

#include "promptbench/dataset.hpp"
#include "promptbench/error.hpp"
#include "promptbench/rng.hpp"

namespace promptbench::synth {
namespace {

int uniform_int(SeededRng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

void coarse_blob(std::vector<std::uint8_t>& bits, int size, SeededRng& rng) {
  const double cx = uniform_int(rng, size / 3, 2 * size / 3);
  const double cy = uniform_int(rng, size / 3, 2 * size / 3);
  const double rx = uniform_int(rng, size / 8, size / 5);
  const double ry = uniform_int(rng, size / 8, size / 5);
  // Low-frequency boundary wobble keeps the blob star-shaped and connected.
  const double a1 = 0.15 * rng.uniform01();
  const double a2 = 0.10 * rng.uniform01();
  const double p1 = 6.283185307179586 * rng.uniform01();
  const double p2 = 6.283185307179586 * rng.uniform01();
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = (x - cx) / rx;
      const double dy = (y - cy) / ry;
      const double theta = std::atan2(dy, dx);
      const double r = 1.0 + a1 * std::sin(3 * theta + p1) + a2 * std::sin(5 * theta + p2);
      if (dx * dx + dy * dy <= r * r) {
        bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(size) +
             static_cast<std::size_t>(x)] = 1;
      }
    }
  }
}

void fine_fragments(std::vector<std::uint8_t>& bits, int size, SeededRng& rng) {
  // Fragments sit on a jittered grid so they never touch each other.
  const int cell = std::max(8, size / 8);
  const int cells = size / cell;
  for (int gy = 0; gy < cells; ++gy) {
    for (int gx = 0; gx < cells; ++gx) {
      if (rng.uniform01() < 0.35) continue;
      const int radius = uniform_int(rng, 2, std::max(2, cell / 2 - 2));
      const int cx = gx * cell + cell / 2 + uniform_int(rng, -(cell / 2 - radius - 1), cell / 2 - radius - 1);
      const int cy = gy * cell + cell / 2 + uniform_int(rng, -(cell / 2 - radius - 1), cell / 2 - radius - 1);
      for (int y = cy - radius; y <= cy + radius; ++y) {
        for (int x = cx - radius; x <= cx + radius; ++x) {
          if (x < 0 || y < 0 || x >= size || y >= size) continue;
          if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) {
            bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(size) +
                 static_cast<std::size_t>(x)] = 1;
          }
        }
      }
    }
  }
}

}  // namespace

EvalPatch make_patch(Morphology morphology, int size, std::uint64_t seed, std::string patch_id,
                     std::string patient_id) {
  if (size < 16) fail(ErrorCode::kInvalidArgument, "synthetic patches need size >= 16");
  SeededRng rng = SeededRng::for_stream(seed, patch_id, "synth");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0);
  if (morphology == Morphology::kCoarse) {
    coarse_blob(bits, size, rng);
  } else {
    fine_fragments(bits, size, rng);
  }
  std::vector<std::uint16_t> samples(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const int base = bits[i] ? kForegroundLevel : kBackgroundLevel;
    samples[i] = static_cast<std::uint16_t>(base + uniform_int(rng, -kNoise, kNoise));
  }
  return EvalPatch{std::move(patch_id), std::move(patient_id),
                   Image::gray(size, size, std::move(samples)),
                   BinaryMask(size, size, std::move(bits)), {}};
}

std::vector<EvalPatch> make_dataset(Morphology morphology, int count, int size, std::uint64_t seed,
                                    int patches_per_patient, const std::string& prefix) {
  if (patches_per_patient < 1) fail(ErrorCode::kInvalidArgument, "patches_per_patient < 1");
  std::vector<EvalPatch> out;
  for (int i = 0; i < count; ++i) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s%04d", prefix.c_str(), i);
    char patient[64];
    std::snprintf(patient, sizeof(patient), "%spat%03d", prefix.c_str(), i / patches_per_patient);
    out.push_back(make_patch(morphology, size, seed, id, patient));
  }
  return out;
}

std::filesystem::path write_dataset(const std::vector<EvalPatch>& patches,
                                    const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "masks");
  DatasetManifest m;
  m.label_set = {{"background", 0}, {"tumor", 1}};
  m.target_labels = {1};
  for (const auto& p : patches) {
    const fs::path image = fs::path("images") / (p.patch_id + ".pgm");
    const fs::path mask = fs::path("masks") / (p.patch_id + ".pgm");
    write_image(p.image, dir / image);
    std::vector<std::uint16_t> labels(p.gt.bits().begin(), p.gt.bits().end());
    write_image(Image::gray(p.gt.width(), p.gt.height(), std::move(labels)), dir / mask);
    m.entries.push_back({p.patch_id, image, mask, p.patient_id});
  }
  const fs::path manifest = dir / "manifest.tsv";
  write_manifest(m, manifest);
  return manifest;
}

}  // namespace promptbench::synth
