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
#include <span>
#include <vector>

#include "promptbench/mask.hpp"

namespace promptbench {

// Row-major run lengths alternating background/foreground, always starting
// with a (possibly zero) background run: [T,T,F,T] encodes as [0,2,1,1].
std::vector<std::uint32_t> rle_encode(const BinaryMask& mask);

// Throws LengthMismatch unless the runs sum to width * height.
BinaryMask rle_decode(std::span<const std::uint32_t> runs, int width, int height);

}  // namespace promptbench
