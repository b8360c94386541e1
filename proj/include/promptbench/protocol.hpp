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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "promptbench/prompt.hpp"
#include "promptbench/raster.hpp"

// Line-oriented segmenter wire protocol. Every record is one compact JSON
// object on one line with keys in sorted order; see PROTOCOL.md.
namespace promptbench::protocol {

inline constexpr std::string_view kVersion = "promptbench-seg/1";

// Either a file path the adapter reads, or inline base-64 samples with
// encoding gray8, gray16 (big-endian) or rgb8.
struct ImageRef {
  std::string path;
  std::string encoding;
  std::string data;

  bool is_inline() const { return path.empty(); }
};

struct SegmentRequest {
  std::uint64_t id = 0;
  int width = 0;
  int height = 0;
  ImageRef image;
  Prompt prompt;
};

struct SegmentResponse {
  std::uint64_t id = 0;
  std::vector<std::uint32_t> rle;
  std::optional<double> latency_ms;
};

struct ErrorRecord {
  std::optional<std::uint64_t> id;
  std::string message;
};

using Reply = std::variant<SegmentResponse, ErrorRecord>;

std::string encode_hello(std::string_view version = kVersion);
// Returns the protocol version announced by a hello line. Throws ProtocolError.
std::string decode_hello(std::string_view line);

std::string encode_request(const SegmentRequest& request);
// Validates shape and that the prompt lies within width x height.
// Throws ProtocolError.
SegmentRequest decode_request(std::string_view line);

std::string encode_reply(const Reply& reply);
Reply decode_reply(std::string_view line);

std::string encode_shutdown();
bool is_shutdown(std::string_view line);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

ImageRef inline_image(const Image& image);
// Throws ProtocolError if the payload does not match width x height.
Image decode_inline(const ImageRef& ref, int width, int height);

}  // namespace promptbench::protocol
