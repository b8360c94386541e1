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

#include "promptbench/prompt.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "promptbench/error.hpp"

namespace promptbench {
namespace {

std::string format_fraction(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_fraction(std::string_view text, std::string_view key) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(ErrorCode::kParseError, "bad value for " + std::string(key) + ": " + std::string(text));
  }
  return v;
}

int parse_count(std::string_view text) {
  int v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(ErrorCode::kParseError, "bad count: " + std::string(text));
  }
  return v;
}

bool parse_flag(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  fail(ErrorCode::kParseError, "bad flag: " + std::string(text));
}

using Params = std::map<std::string, std::string, std::less<>>;

Params parse_params(std::string_view text) {
  Params params;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      fail(ErrorCode::kParseError, "expected key=value, got '" + std::string(item) + "'");
    }
    auto [it, inserted] =
        params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (!inserted) fail(ErrorCode::kParseError, "repeated key " + it->first);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) fail(ErrorCode::kParseError, "trailing comma");
  }
  return params;
}

}  // namespace

std::size_t Prompt::positive_count() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) {
    return p.polarity == Polarity::kPositive;
  }));
}

std::size_t Prompt::negative_count() const { return points.size() - positive_count(); }

void validate_prompt(const Prompt& prompt, int width, int height) {
  if (!prompt.box && prompt.points.empty()) fail(ErrorCode::kInvalidArgument, "empty prompt");
  if (prompt.box && !prompt.box->valid_in(width, height)) {
    fail(ErrorCode::kInvalidArgument, "box outside image");
  }
  for (const auto& p : prompt.points) {
    if (p.point.x < 0 || p.point.y < 0 || p.point.x >= width || p.point.y >= height) {
      fail(ErrorCode::kInvalidArgument, "point (" + std::to_string(p.point.x) + "," +
                                            std::to_string(p.point.y) + ") outside image");
    }
  }
}

bool StrategySpec::uses_points() const {
  return kind == StrategyKind::kPositivePoints || kind == StrategyKind::kPointsPlusBox ||
         kind == StrategyKind::kNegativeMix;
}

void StrategySpec::validate() const {
  if (uses_points() && k_points < 1) fail(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (!uses_points() && k_points != 0) {
    fail(ErrorCode::kInvalidArgument, "k is only meaningful for point strategies");
  }
  if (!(jitter_pct >= 0.0 && jitter_pct < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "jitter must be in [0,1)");
  }
  if (kind != StrategyKind::kJitteredBox &&
      (jitter_pct != 0.0 || jitter_mode != JitterMode::kDeterministic)) {
    fail(ErrorCode::kInvalidArgument, "jitter is only meaningful for box:jitter");
  }
  if (!(negative_fraction >= 0.0 && negative_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "negative fraction must be in [0,1)");
  }
  if (kind != StrategyKind::kNegativeMix && negative_fraction != 0.0) {
    fail(ErrorCode::kInvalidArgument, "negative fraction is only meaningful for negmix");
  }
  const bool box_implied = kind == StrategyKind::kBoxOnly ||
                           kind == StrategyKind::kPointsPlusBox ||
                           kind == StrategyKind::kJitteredBox;
  if (kind != StrategyKind::kNegativeMix && with_box != box_implied) {
    fail(ErrorCode::kInvalidArgument, "box flag inconsistent with strategy kind");
  }
}

StrategySpec StrategySpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  Params params = colon == std::string_view::npos ? Params{} : parse_params(text.substr(colon + 1));
  if (colon != std::string_view::npos && params.empty()) {
    fail(ErrorCode::kParseError, "empty parameter list in '" + std::string(text) + "'");
  }
  auto take = [&](std::string_view key) -> std::optional<std::string> {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    std::string v = it->second;
    params.erase(it);
    return v;
  };

  StrategySpec spec;
  if (name == "points" || name == "points+box") {
    spec.kind = name == "points" ? StrategyKind::kPositivePoints : StrategyKind::kPointsPlusBox;
    spec.with_box = name == "points+box";
    auto k = take("k");
    if (!k) fail(ErrorCode::kParseError, "missing k in '" + std::string(text) + "'");
    spec.k_points = parse_count(*k);
  } else if (name == "box") {
    spec.with_box = true;
    auto jitter = take("jitter");
    auto mode = take("mode");
    if (jitter) {
      spec.kind = StrategyKind::kJitteredBox;
      spec.jitter_pct = parse_fraction(*jitter, "jitter");
      if (mode) {
        if (*mode == "random") {
          spec.jitter_mode = JitterMode::kRandom;
        } else if (*mode != "fixed") {
          fail(ErrorCode::kParseError, "unknown jitter mode " + *mode);
        }
      }
    } else {
      if (mode) fail(ErrorCode::kParseError, "mode requires jitter");
      spec.kind = StrategyKind::kBoxOnly;
    }
  } else if (name == "negmix") {
    spec.kind = StrategyKind::kNegativeMix;
    auto k = take("k");
    auto neg = take("neg");
    auto box = take("box");
    if (!k || !neg) fail(ErrorCode::kParseError, "negmix needs k and neg");
    spec.k_points = parse_count(*k);
    spec.negative_fraction = parse_fraction(*neg, "neg");
    spec.with_box = box ? parse_flag(*box) : false;
  } else if (name == "center") {
    spec.kind = StrategyKind::kBoxCenter;
  } else if (name == "centroid") {
    spec.kind = StrategyKind::kCentroid;
  } else if (name == "quad4") {
    spec.kind = StrategyKind::kQuadrantSample;
  } else {
    fail(ErrorCode::kParseError, "unknown strategy '" + std::string(name) + "'");
  }
  if (!params.empty()) {
    fail(ErrorCode::kParseError,
         "unexpected key '" + params.begin()->first + "' in '" + std::string(text) + "'");
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kParseError, std::string(text) + ": " + e.detail());
  }
  return spec;
}

std::string StrategySpec::canonical() const {
  switch (kind) {
    case StrategyKind::kPositivePoints:
      return "points:k=" + std::to_string(k_points);
    case StrategyKind::kPointsPlusBox:
      return "points+box:k=" + std::to_string(k_points);
    case StrategyKind::kBoxOnly:
      return "box";
    case StrategyKind::kJitteredBox:
      return "box:jitter=" + format_fraction(jitter_pct) +
             (jitter_mode == JitterMode::kRandom ? ",mode=random" : "");
    case StrategyKind::kNegativeMix:
      return "negmix:k=" + std::to_string(k_points) + ",neg=" + format_fraction(negative_fraction) +
             ",box=" + (with_box ? "true" : "false");
    case StrategyKind::kBoxCenter:
      return "center";
    case StrategyKind::kCentroid:
      return "centroid";
    case StrategyKind::kQuadrantSample:
      return "quad4";
  }
  return {};
}

}  // namespace promptbench
