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

#include <array>
#include <cstdint>
#include <span>

namespace promptbench {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Per-pixel kernels over row-major byte grids. The default implementations
// are OpenMP-parallel above a size threshold; kernels::reference holds the
// plain serial loops they are tested and benchmarked against. Results are
// integer counts, so both paths agree exactly.
namespace kernels {

inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

using LabelTable = std::array<bool, 256>;

std::uint64_t count_nonzero(std::span<const std::uint8_t> bits);
void label_membership(std::span<const std::uint8_t> labels, const LabelTable& table,
                      std::span<std::uint8_t> out);
ConfusionCounts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt);

namespace reference {

std::uint64_t count_nonzero(std::span<const std::uint8_t> bits);
void label_membership(std::span<const std::uint8_t> labels, const LabelTable& table,
                      std::span<std::uint8_t> out);
ConfusionCounts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt);

}  // namespace reference
}  // namespace kernels
}  // namespace promptbench
