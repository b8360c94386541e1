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

namespace promptbench::kernels::reference {

std::uint64_t count_nonzero(std::span<const std::uint8_t> bits) {
  std::uint64_t count = 0;
  for (std::uint8_t b : bits) {
    if (b != 0) ++count;
  }
  return count;
}

void label_membership(std::span<const std::uint8_t> labels, const LabelTable& table,
                      std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = table[labels[i]] ? 1 : 0;
  }
}

ConfusionCounts confusion(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool a = pred[i] != 0;
    const bool b = gt[i] != 0;
    if (a && b) {
      ++c.tp;
    } else if (a) {
      ++c.fp;
    } else if (b) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

}  // namespace promptbench::kernels::reference
