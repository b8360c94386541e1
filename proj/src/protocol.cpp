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

#include "promptbench/protocol.hpp"

#include <nlohmann/json.hpp>

#include "promptbench/error.hpp"

namespace promptbench::protocol {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& why) { fail(ErrorCode::kProtocolError, why); }

json parse_line(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) bad("not a JSON object: " + std::string(line.substr(0, 80)));
  return j;
}

std::string type_of(const json& j) {
  auto it = j.find("type");
  if (it == j.end() || !it->is_string()) bad("record without type");
  return it->get<std::string>();
}

template <typename T>
T field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    bad(std::string("bad field '") + key + "'");
  }
}

std::string dump(const json& j) { return j.dump(); }

}  // namespace

std::string encode_hello(std::string_view version) {
  return dump(json{{"type", "hello"}, {"protocol", std::string(version)}});
}

std::string decode_hello(std::string_view line) {
  const json j = parse_line(line);
  if (type_of(j) != "hello") bad("expected hello record");
  return field<std::string>(j, "protocol");
}

std::string encode_request(const SegmentRequest& r) {
  json j;
  j["type"] = "segment";
  j["id"] = r.id;
  j["width"] = r.width;
  j["height"] = r.height;
  if (r.image.is_inline()) {
    j["image"] = json{{"encoding", r.image.encoding}, {"data", r.image.data}};
  } else {
    j["image"] = json{{"path", r.image.path}};
  }
  if (r.prompt.box) {
    const auto& b = *r.prompt.box;
    j["box"] = json::array({b.x_min, b.y_min, b.x_max, b.y_max});
  } else {
    j["box"] = nullptr;
  }
  json points = json::array();
  for (const auto& p : r.prompt.points) {
    points.push_back(json::array({p.point.x, p.point.y, p.polarity == Polarity::kPositive ? 1 : 0}));
  }
  j["points"] = std::move(points);
  return dump(j);
}

SegmentRequest decode_request(std::string_view line) {
  const json j = parse_line(line);
  if (type_of(j) != "segment") bad("expected segment record");
  SegmentRequest r;
  r.id = field<std::uint64_t>(j, "id");
  r.width = field<int>(j, "width");
  r.height = field<int>(j, "height");
  if (r.width < 1 || r.height < 1 || r.width > kMaxMaskSide || r.height > kMaxMaskSide) {
    bad("bad image dimensions");
  }
  const json image = field<json>(j, "image");
  if (!image.is_object()) bad("image must be an object");
  if (image.contains("path")) {
    r.image.path = field<std::string>(image, "path");
    if (r.image.path.empty()) bad("empty image path");
  } else {
    r.image.encoding = field<std::string>(image, "encoding");
    r.image.data = field<std::string>(image, "data");
  }
  const json box = field<json>(j, "box");
  if (!box.is_null()) {
    const auto v = field<std::vector<int>>(j, "box");
    if (v.size() != 4) bad("box needs 4 values");
    r.prompt.box = BBox{v[0], v[1], v[2], v[3]};
  }
  for (const auto& p : field<std::vector<std::vector<int>>>(j, "points")) {
    if (p.size() != 3 || (p[2] != 0 && p[2] != 1)) bad("point needs [x, y, 0|1]");
    r.prompt.points.push_back(
        {{p[0], p[1]}, p[2] == 1 ? Polarity::kPositive : Polarity::kNegative});
  }
  try {
    validate_prompt(r.prompt, r.width, r.height);
  } catch (const Error& e) {
    bad(e.detail());
  }
  return r;
}

std::string encode_reply(const Reply& reply) {
  if (const auto* ok = std::get_if<SegmentResponse>(&reply)) {
    json j{{"type", "mask"}, {"id", ok->id}, {"rle", ok->rle}};
    if (ok->latency_ms) j["latency_ms"] = *ok->latency_ms;
    return dump(j);
  }
  const auto& err = std::get<ErrorRecord>(reply);
  json j{{"type", "error"}, {"message", err.message}};
  j["id"] = err.id ? json(*err.id) : json(nullptr);
  return dump(j);
}

Reply decode_reply(std::string_view line) {
  const json j = parse_line(line);
  const std::string type = type_of(j);
  if (type == "mask") {
    SegmentResponse r;
    r.id = field<std::uint64_t>(j, "id");
    r.rle = field<std::vector<std::uint32_t>>(j, "rle");
    if (j.contains("latency_ms")) r.latency_ms = field<double>(j, "latency_ms");
    return r;
  }
  if (type == "error") {
    ErrorRecord e;
    auto it = j.find("id");
    if (it != j.end() && !it->is_null()) e.id = field<std::uint64_t>(j, "id");
    e.message = field<std::string>(j, "message");
    return e;
  }
  bad("unexpected record type '" + type + "'");
}

std::string encode_shutdown() { return dump(json{{"type", "shutdown"}}); }

bool is_shutdown(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  return j.is_object() && j.value("type", "") == "shutdown";
}

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i + 1 == bytes.size()) {
    const std::uint32_t v = bytes[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) bad("base64 length not a multiple of 4");
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + static_cast<std::size_t>(k)];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        v[k] = 0;
        ++pad;
      } else {
        v[k] = value(c);
        if (v[k] < 0 || pad > 0) bad("bad base64 character");
      }
    }
    const std::uint32_t n = static_cast<std::uint32_t>((v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3]);
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((n >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(n & 0xff));
  }
  return out;
}

ImageRef inline_image(const Image& image) {
  ImageRef ref;
  std::vector<std::uint8_t> bytes;
  if (image.channels == 3) {
    ref.encoding = "rgb8";
    for (auto s : image.samples) bytes.push_back(static_cast<std::uint8_t>(s));
  } else if (image.max_value > 255) {
    ref.encoding = "gray16";
    for (auto s : image.samples) {
      bytes.push_back(static_cast<std::uint8_t>(s >> 8));
      bytes.push_back(static_cast<std::uint8_t>(s & 0xff));
    }
  } else {
    ref.encoding = "gray8";
    for (auto s : image.samples) bytes.push_back(static_cast<std::uint8_t>(s));
  }
  ref.data = base64_encode(bytes);
  return ref;
}

Image decode_inline(const ImageRef& ref, int width, int height) {
  const auto bytes = base64_decode(ref.data);
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::uint16_t> samples;
  if (ref.encoding == "gray8") {
    if (bytes.size() != n) bad("gray8 payload size mismatch");
    samples.assign(bytes.begin(), bytes.end());
    return Image::gray(width, height, std::move(samples));
  }
  if (ref.encoding == "gray16") {
    if (bytes.size() != 2 * n) bad("gray16 payload size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      samples.push_back(static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]));
    }
    return Image::gray(width, height, std::move(samples), 65535);
  }
  if (ref.encoding == "rgb8") {
    if (bytes.size() != 3 * n) bad("rgb8 payload size mismatch");
    samples.assign(bytes.begin(), bytes.end());
    return Image::rgb(width, height, std::move(samples));
  }
  bad("unknown image encoding '" + ref.encoding + "'");
}

}  // namespace promptbench::protocol
