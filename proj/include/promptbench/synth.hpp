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
#include <string>
#include <vector>

#include "promptbench/runner.hpp"

namespace promptbench::synth {

// Generated test morphologies:
//  kCoarse: one large smooth blob, like a tumor region on an MRI slice.
//  kFine:   dozens of small disjoint cell-sized fragments, like tumor nuclei
//           in a pathology patch.
// Foreground and background intensities are separated by far more than the
// per-pixel noise, so an intensity flood fill recovers exactly the connected
// fragment it starts in.
enum class Morphology { kCoarse, kFine };

inline constexpr int kBackgroundLevel = 60;
inline constexpr int kForegroundLevel = 170;
inline constexpr int kNoise = 10;

EvalPatch make_patch(Morphology morphology, int size, std::uint64_t seed, std::string patch_id,
                     std::string patient_id);

// count patches, patches_per_patient per patient, ids "<prefix>0000".
std::vector<EvalPatch> make_dataset(Morphology morphology, int count, int size, std::uint64_t seed,
                                    int patches_per_patient = 1, const std::string& prefix = "p");

// Writes images/<id>.pgm, masks/<id>.pgm (labels background=0, tumor=1) and
// manifest.tsv under dir. Returns the manifest path.
std::filesystem::path write_dataset(const std::vector<EvalPatch>& patches,
                                    const std::filesystem::path& dir);

}  // namespace promptbench::synth
