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

#include "promptbench/kernels.hpp"

#include <cstddef>

namespace promptbench::kernels {

std::uint64_t count_nonzero(std::span<const std::uint8_t> bits) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(bits.size());
  const std::uint8_t* data = bits.data();
  std::uint64_t count = 0;
#pragma omp parallel for reduction(+ : count) schedule(static) if (bits.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    count += data[i] != 0 ? 1u : 0u;
  }
  return count;
}

void label_membership(std::span<const std::uint8_t> labels, const LabelTable& table,
                      std::span<std::uint8_t> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(labels.size());
  const std::uint8_t* in = labels.data();
  std::uint8_t* dst = out.data();
#pragma omp parallel for schedule(static) if (labels.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dst[i] = table[in[i]] ? 1 : 0;
  }
}

ConfusionCounts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pred.size());
  const std::uint8_t* p = pred.data();
  const std::uint8_t* g = gt.data();
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
#pragma omp parallel for reduction(+ : tp, fp, fn) schedule(static) if (pred.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const unsigned a = p[i] != 0 ? 1u : 0u;
    const unsigned b = g[i] != 0 ? 1u : 0u;
    tp += a & b;
    fp += a & (b ^ 1u);
    fn += (a ^ 1u) & b;
  }
  ConfusionCounts c;
  c.tp = tp;
  c.fp = fp;
  c.fn = fn;
  c.tn = static_cast<std::uint64_t>(n) - tp - fp - fn;
  return c;
}

}  // namespace promptbench::kernels
