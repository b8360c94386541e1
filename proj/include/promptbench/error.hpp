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

#include <stdexcept>
#include <string>
#include <string_view>

namespace promptbench {

enum class ErrorCode {
  kEmptyMask,
  kUnknownLabel,
  kInsufficientForeground,
  kInsufficientBackground,
  kInvalidArgument,
  kDimensionMismatch,
  kZeroBaseline,
  kEmptyList,
  kParseError,
  kMissingFile,
  kDuplicatePatchId,
  kDecodeError,
  kTooFewPatients,
  kLengthMismatch,
  kBackendCrashed,
  kProtocolError,
  kTimeout,
  kSpawnFailed,
  kHandshakeMismatch,
  kConfigError,
  kBackendUnavailable,
  kIoError,
  kNoOkRecords,
  kMissingEffortScore,
};

std::string_view error_name(ErrorCode code);

// Every failure in the library is reported as an Error. what() carries the
// error name followed by detail, e.g. "InsufficientForeground(5,3)".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail = {});

}  // namespace promptbench
