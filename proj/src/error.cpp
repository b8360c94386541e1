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

#include "promptbench/error.hpp"

namespace promptbench {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kInsufficientForeground: return "InsufficientForeground";
    case ErrorCode::kInsufficientBackground: return "InsufficientBackground";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kDuplicatePatchId: return "DuplicatePatchId";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kTooFewPatients: return "TooFewPatients";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kBackendCrashed: return "BackendCrashed";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kSpawnFailed: return "SpawnFailed";
    case ErrorCode::kHandshakeMismatch: return "HandshakeMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNoOkRecords: return "NoOkRecords";
    case ErrorCode::kMissingEffortScore: return "MissingEffortScore";
  }
  return "Unknown";
}

namespace {

std::string format_what(ErrorCode code, const std::string& detail) {
  std::string out(error_name(code));
  if (!detail.empty()) {
    out += '(';
    out += detail;
    out += ')';
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(format_what(code, detail)), code_(code), detail_(detail) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace promptbench
