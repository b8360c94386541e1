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
#include <string_view>

namespace promptbench {

// SplitMix64 finalizer; used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

// Portable deterministic generator: xoshiro256** seeded through SplitMix64.
// Bounded integers use rejection sampling, never std:: distributions, so the
// sequence for a given seed is identical on every platform and compiler.
//
// Streams are keyed by (seed, patch id, strategy id, draw): the key is folded
// with FNV-1a over length-prefixed fields and mixed with the seed, so adding a
// patch or a strategy never perturbs any other stream.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  static SeededRng for_stream(std::uint64_t seed, std::string_view patch_id,
                              std::string_view strategy_id, std::uint32_t draw = 0);
  static std::uint64_t stream_key(std::uint64_t seed, std::string_view patch_id,
                                  std::string_view strategy_id, std::uint32_t draw = 0);

  std::uint64_t next_u64();
  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

 private:
  std::uint64_t s_[4];
};

}  // namespace promptbench
