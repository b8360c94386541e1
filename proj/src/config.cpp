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

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "promptbench/error.hpp"
#include "promptbench/runner.hpp"

namespace promptbench {
namespace {

using Value = std::variant<std::string, std::int64_t, double, bool, std::vector<std::string>>;

[[noreturn]] void config_fail(std::size_t line, const std::string& why) {
  fail(ErrorCode::kConfigError, "line " + std::to_string(line) + ": " + why);
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Value parse() {
    skip_space();
    Value v = value();
    skip_space();
    if (pos_ != text_.size()) config_fail(line_, "trailing characters after value");
    return v;
  }

 private:
  Value value() {
    if (pos_ >= text_.size()) config_fail(line_, "missing value");
    const char c = text_[pos_];
    if (c == '"') return string();
    if (c == '[') return array();
    std::size_t end = pos_;
    while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])) &&
           text_[end] != '#' && text_[end] != ',' && text_[end] != ']') {
      ++end;
    }
    const std::string_view word = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (word == "true") return true;
    if (word == "false") return false;
    std::int64_t i = 0;
    auto ri = std::from_chars(word.data(), word.data() + word.size(), i);
    if (ri.ec == std::errc() && ri.ptr == word.data() + word.size()) return i;
    double d = 0;
    auto rd = std::from_chars(word.data(), word.data() + word.size(), d);
    if (rd.ec == std::errc() && rd.ptr == word.data() + word.size()) return d;
    config_fail(line_, "cannot parse value '" + std::string(word) + "'");
  }

  std::string string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\' && pos_ < text_.size()) {
        const char e = text_[pos_++];
        c = e == 'n' ? '\n' : e == 't' ? '\t' : e;
      }
      out += c;
    }
    if (pos_ >= text_.size()) config_fail(line_, "unterminated string");
    ++pos_;
    return out;
  }

  std::vector<std::string> array() {
    ++pos_;
    std::vector<std::string> items;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) config_fail(line_, "unterminated array");
      if (text_[pos_] == ']') {
        ++pos_;
        return items;
      }
      if (text_[pos_] != '"') config_fail(line_, "arrays hold strings only");
      items.push_back(string());
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

template <typename T>
T as(const Value& v, const std::string& key, std::size_t line) {
  if constexpr (std::is_same_v<T, double>) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  }
  if (const auto* t = std::get_if<T>(&v)) return *t;
  config_fail(line, "wrong type for '" + key + "'");
}

std::size_t bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    }
  }
  return depth > 0 ? static_cast<std::size_t>(depth) : 0;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, std::size_t> seen;
  bool have_manifest = false;
  bool have_strategies = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t start_line = lineno;
    std::string stmt = line;
    while (bracket_balance(stmt) > 0) {
      std::string more;
      if (!std::getline(in, more)) config_fail(start_line, "unterminated array");
      ++lineno;
      stmt += "\n" + more;
    }
    const auto first = stmt.find_first_not_of(" \t\r");
    if (first == std::string::npos || stmt[first] == '#') continue;
    const auto eq = stmt.find('=');
    if (eq == std::string::npos) config_fail(start_line, "expected key = value");
    std::string key = stmt.substr(first, eq - first);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    if (!seen.emplace(key, start_line).second) config_fail(start_line, "duplicate key '" + key + "'");
    const Value v = ValueParser(stmt.substr(eq + 1), start_line).parse();

    if (key == "manifest") {
      cfg.manifest = base_dir / as<std::string>(v, key, start_line);
      have_manifest = true;
    } else if (key == "split_file") {
      cfg.split_file = base_dir / as<std::string>(v, key, start_line);
    } else if (key == "split_seed") {
      cfg.split_seed = static_cast<std::uint64_t>(as<std::int64_t>(v, key, start_line));
    } else if (key == "train_fraction") {
      cfg.train_fraction = as<double>(v, key, start_line);
    } else if (key == "evaluate") {
      const auto which = as<std::string>(v, key, start_line);
      if (which != "test" && which != "all") config_fail(start_line, "evaluate must be test or all");
      cfg.evaluate_all = which == "all";
    } else if (key == "global_seed") {
      cfg.global_seed = static_cast<std::uint64_t>(as<std::int64_t>(v, key, start_line));
    } else if (key == "backend") {
      cfg.backend = as<std::string>(v, key, start_line);
    } else if (key == "strategies") {
      cfg.strategies = as<std::vector<std::string>>(v, key, start_line);
      have_strategies = true;
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(as<std::int64_t>(v, key, start_line));
    } else if (key == "timeout_ms") {
      cfg.timeout = std::chrono::milliseconds(as<std::int64_t>(v, key, start_line));
    } else if (key == "draws") {
      cfg.draws = static_cast<std::uint32_t>(as<std::int64_t>(v, key, start_line));
    } else {
      config_fail(start_line, "unknown key '" + key + "'");
    }
  }
  if (!have_manifest) fail(ErrorCode::kConfigError, "missing 'manifest'");
  if (!have_strategies) fail(ErrorCode::kConfigError, "missing 'strategies'");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kMissingFile, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void ExperimentConfig::validate() const {
  if (strategies.empty()) fail(ErrorCode::kConfigError, "strategy list is empty");
  for (const auto& s : strategies) {
    try {
      StrategySpec::parse(s);
    } catch (const Error& e) {
      fail(ErrorCode::kConfigError, "strategy: " + e.detail());
    }
  }
  try {
    BackendSpec::parse(backend);
  } catch (const Error& e) {
    fail(ErrorCode::kConfigError, e.detail());
  }
  if (workers < 1 || workers > 1024) fail(ErrorCode::kConfigError, "workers must be in 1..1024");
  if (draws < 1) fail(ErrorCode::kConfigError, "draws must be >= 1");
  if (timeout.count() < 1) fail(ErrorCode::kConfigError, "timeout_ms must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorCode::kConfigError, "train_fraction must be in (0,1)");
  }
}

}  // namespace promptbench
