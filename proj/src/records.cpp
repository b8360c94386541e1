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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "promptbench/error.hpp"
#include "promptbench/runner.hpp"

namespace promptbench {
namespace {

constexpr const char* kColumns =
    "patch_id\tpatient_id\tstrategy\tdraw\tstatus\treason\tdice\tiou\ttp\tfp\tfn\ttn\tpositives\t"
    "negatives\tbox";
constexpr std::size_t kColumnCount = 15;

std::string clean(std::string s) {
  for (auto& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string fixed9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

[[noreturn]] void row_fail(std::size_t row, const std::string& why) {
  fail(ErrorCode::kParseError, "row " + std::to_string(row) + ": " + why);
}

template <typename T>
T number(const std::string& s, std::size_t row, const char* what) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    row_fail(row, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

void write_records(std::span<const EvalRecord> records, std::ostream& out) {
  out << kRecordsHeader << '\n' << kColumns << '\n';
  for (const auto& r : records) {
    out << clean(r.patch_id) << '\t' << clean(r.patient_id) << '\t' << clean(r.strategy) << '\t'
        << r.draw << '\t' << status_name(r.status) << '\t' << clean(r.reason) << '\t';
    if (r.ok()) {
      out << fixed9(r.dice()) << '\t' << fixed9(r.iou()) << '\t' << r.counts.tp << '\t'
          << r.counts.fp << '\t' << r.counts.fn << '\t' << r.counts.tn;
    } else {
      out << "\t\t\t\t\t";
    }
    out << '\t' << r.positives << '\t' << r.negatives << '\t' << (r.has_box ? 1 : 0) << '\n';
  }
}

void write_records(std::span<const EvalRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  write_records(records, out);
  if (!out) fail(ErrorCode::kIoError, "short write to " + path.string());
}

std::vector<EvalRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) row_fail(1, "missing records header");
  if (!std::getline(in, line) || line != kColumns) row_fail(2, "unexpected column header");
  std::vector<EvalRecord> records;
  std::size_t row = 2;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      f.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (f.size() != kColumnCount) {
      row_fail(row, "expected " + std::to_string(kColumnCount) + " fields, got " +
                        std::to_string(f.size()));
    }
    EvalRecord r;
    r.patch_id = f[0];
    r.patient_id = f[1];
    r.strategy = f[2];
    r.draw = number<std::uint32_t>(f[3], row, "draw");
    if (f[4] == "ok") {
      r.status = RecordStatus::kOk;
    } else if (f[4] == "skipped") {
      r.status = RecordStatus::kSkipped;
    } else if (f[4] == "failed") {
      r.status = RecordStatus::kFailed;
    } else {
      row_fail(row, "bad status '" + f[4] + "'");
    }
    r.reason = f[5];
    if (r.ok()) {
      r.counts.tp = number<std::uint64_t>(f[8], row, "tp");
      r.counts.fp = number<std::uint64_t>(f[9], row, "fp");
      r.counts.fn = number<std::uint64_t>(f[10], row, "fn");
      r.counts.tn = number<std::uint64_t>(f[11], row, "tn");
      const double dice = number<double>(f[6], row, "dice");
      const double iou = number<double>(f[7], row, "iou");
      if (std::abs(dice - r.dice()) > 5e-10 || std::abs(iou - r.iou()) > 5e-10) {
        row_fail(row, "dice/iou disagree with counts");
      }
    } else {
      for (std::size_t i = 6; i <= 11; ++i) {
        if (!f[i].empty()) row_fail(row, "scores present on a non-ok record");
      }
    }
    r.positives = number<std::uint32_t>(f[12], row, "positives");
    r.negatives = number<std::uint32_t>(f[13], row, "negatives");
    if (f[14] != "0" && f[14] != "1") row_fail(row, "bad box flag");
    r.has_box = f[14] == "1";
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<EvalRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path.string());
  return read_records(in);
}

}  // namespace promptbench
