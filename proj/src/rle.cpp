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

#include "promptbench/rle.hpp"

#include <string>

#include "promptbench/error.hpp"

namespace promptbench {

std::vector<std::uint32_t> rle_encode(const BinaryMask& mask) {
  std::vector<std::uint32_t> runs;
  std::uint8_t current = 0;
  std::uint32_t length = 0;
  for (std::uint8_t b : mask.bits()) {
    if (b != current) {
      runs.push_back(length);
      current = b;
      length = 0;
    }
    ++length;
  }
  runs.push_back(length);
  return runs;
}

BinaryMask rle_decode(std::span<const std::uint32_t> runs, int width, int height) {
  const std::uint64_t expected =
      static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  std::uint64_t total = 0;
  for (auto r : runs) total += r;
  if (total != expected) {
    fail(ErrorCode::kLengthMismatch,
         "runs sum to " + std::to_string(total) + ", expected " + std::to_string(expected));
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(expected);
  std::uint8_t value = 0;
  for (auto r : runs) {
    bits.insert(bits.end(), r, value);
    value ^= 1;
  }
  return BinaryMask(width, height, std::move(bits));
}

}  // namespace promptbench
