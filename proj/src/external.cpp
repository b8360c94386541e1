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

#include "promptbench/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "promptbench/error.hpp"
#include "promptbench/protocol.hpp"
#include "promptbench/rle.hpp"

extern char** environ;

namespace promptbench {
namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text() { return std::strerror(errno); }

}  // namespace

ExternalSegmenter::ExternalSegmenter(std::vector<std::string> argv, BackendOptions options)
    : argv_(std::move(argv)), options_(std::move(options)) {
  if (argv_.empty()) fail(ErrorCode::kSpawnFailed, "empty command");
  start();
}

ExternalSegmenter::~ExternalSegmenter() { stop(true); }

std::string ExternalSegmenter::name() const {
  std::string out = "external:";
  for (std::size_t i = 0; i < argv_.size(); ++i) out += (i ? " " : "") + argv_[i];
  return out;
}

void ExternalSegmenter::start() {
  // A dead child must surface as BackendCrashed, not kill the harness.
  ::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) fail(ErrorCode::kSpawnFailed, "pipe: " + errno_text());
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    fail(ErrorCode::kSpawnFailed, "pipe: " + errno_text());
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<std::string> env_storage;
  for (char** e = environ; *e; ++e) env_storage.emplace_back(*e);
  for (const auto& [key, value] : options_.env) env_storage.push_back(key + "=" + value);
  std::vector<char*> envp;
  for (auto& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);
  std::vector<char*> args;
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    fail(ErrorCode::kSpawnFailed, argv_[0] + ": " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();

  try {
    hello_ = read_line(options_.timeout, "handshake");
  } catch (const Error& e) {
    stop(false);
    fail(ErrorCode::kHandshakeMismatch, "no hello from " + argv_[0] + ": " + e.what());
  }
  std::string version;
  try {
    version = protocol::decode_hello(hello_);
  } catch (const Error& e) {
    stop(false);
    fail(ErrorCode::kHandshakeMismatch, e.detail());
  }
  if (version != protocol::kVersion) {
    stop(false);
    fail(ErrorCode::kHandshakeMismatch,
         "adapter speaks '" + version + "', expected '" + std::string(protocol::kVersion) + "'");
  }
}

void ExternalSegmenter::stop(bool graceful) {
  if (pid_ <= 0) return;
  if (graceful && to_child_ >= 0) {
    const std::string bye = protocol::encode_shutdown() + "\n";
    [[maybe_unused]] auto n = ::write(to_child_, bye.data(), bye.size());
  }
  if (to_child_ >= 0) ::close(to_child_);
  to_child_ = -1;
  int status = 0;
  bool reaped = false;
  if (graceful) {
    const auto deadline = Clock::now() + std::chrono::milliseconds(500);
    while (Clock::now() < deadline) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        reaped = true;
        break;
      }
      ::usleep(2000);
    }
  }
  if (!reaped) {
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }
  if (from_child_ >= 0) ::close(from_child_);
  from_child_ = -1;
  pid_ = -1;
}

void ExternalSegmenter::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      stop(false);
      fail(ErrorCode::kBackendCrashed, "write failed: " + errno_text());
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string ExternalSegmenter::read_line(std::chrono::milliseconds timeout,
                                         const std::string& context) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto now = Clock::now();
    if (now >= deadline) {
      stop(false);
      fail(ErrorCode::kTimeout, context + " after " + std::to_string(timeout.count()) + "ms");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const auto left = std::chrono::ceil<std::chrono::milliseconds>(deadline - now);
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      stop(false);
      fail(ErrorCode::kBackendCrashed, context + ": poll failed");
    }
    if (rc == 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      stop(false);
      fail(ErrorCode::kBackendCrashed, context + ": adapter exited");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string ExternalSegmenter::exchange(const std::string& line) {
  if (!running()) start();
  write_line(line);
  return read_line(options_.timeout, "reply");
}

BinaryMask ExternalSegmenter::segment(const SegmentTask& task) {
  if (!running()) start();
  protocol::SegmentRequest req;
  req.id = next_id_++;
  req.width = task.image.width;
  req.height = task.image.height;
  if (!task.image_path.empty()) {
    req.image.path = std::filesystem::absolute(task.image_path).string();
  } else {
    req.image = protocol::inline_image(task.image);
  }
  req.prompt = task.prompt;
  const std::string context = "request " + std::to_string(req.id);
  write_line(protocol::encode_request(req));
  const std::string line = read_line(options_.timeout, context);
  protocol::Reply reply;
  try {
    reply = protocol::decode_reply(line);
  } catch (const Error& e) {
    stop(false);
    fail(ErrorCode::kProtocolError, context + ": " + e.detail());
  }
  if (const auto* err = std::get_if<protocol::ErrorRecord>(&reply)) {
    if (err->id && *err->id != req.id) {
      stop(false);
      fail(ErrorCode::kProtocolError, context + ": error record for id " + std::to_string(*err->id));
    }
    fail(ErrorCode::kProtocolError, context + ": adapter error: " + err->message);
  }
  const auto& ok = std::get<protocol::SegmentResponse>(reply);
  if (ok.id != req.id) {
    stop(false);
    fail(ErrorCode::kProtocolError,
         context + ": response carries id " + std::to_string(ok.id));
  }
  try {
    return rle_decode(ok.rle, req.width, req.height);
  } catch (const Error& e) {
    fail(ErrorCode::kDimensionMismatch, context + ": " + e.detail());
  }
}

std::unique_ptr<ExternalSegmenter> spawn_external(const std::vector<std::string>& argv,
                                                  const BackendOptions& options) {
  return std::make_unique<ExternalSegmenter>(argv, options);
}

}  // namespace promptbench
