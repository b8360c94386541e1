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

#include <sys/types.h>

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "promptbench/segmenter.hpp"

namespace promptbench {

// A child process speaking the line protocol on its stdin/stdout. Requests
// are sent one at a time with strictly increasing ids. After a crash or
// timeout the child is killed and the next segment() call respawns it.
class ExternalSegmenter final : public Segmenter {
 public:
  ExternalSegmenter(std::vector<std::string> argv, BackendOptions options);
  ~ExternalSegmenter() override;
  ExternalSegmenter(const ExternalSegmenter&) = delete;
  ExternalSegmenter& operator=(const ExternalSegmenter&) = delete;

  BinaryMask segment(const SegmentTask& task) override;
  std::string name() const override;

  // Starts the child and checks its hello line (SpawnFailed,
  // HandshakeMismatch). Called by the constructor.
  void start();
  bool running() const { return pid_ > 0; }
  std::uint64_t last_request_id() const { return next_id_ - 1; }

  // Raw exchange used by conformance checks: writes one line, returns the
  // next line the child prints. Throws BackendCrashed, Timeout.
  std::string exchange(const std::string& line);
  const std::string& hello_line() const { return hello_; }

 private:
  void write_line(const std::string& line);
  std::string read_line(std::chrono::milliseconds timeout, const std::string& context);
  void stop(bool graceful);

  std::vector<std::string> argv_;
  BackendOptions options_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::string hello_;
  std::uint64_t next_id_ = 1;
};

std::unique_ptr<ExternalSegmenter> spawn_external(const std::vector<std::string>& argv,
                                                  const BackendOptions& options);

}  // namespace promptbench
