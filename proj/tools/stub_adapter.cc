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

// Reference adapter for the promptbench-seg/1 line protocol. Answers segment
// requests with a box fill or an intensity flood fill, and can misbehave on
// demand so the harness's failure handling can be exercised.

#include <unistd.h>

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "promptbench/error.hpp"
#include "promptbench/protocol.hpp"
#include "promptbench/raster.hpp"
#include "promptbench/rle.hpp"
#include "promptbench/segmenter.hpp"

namespace pb = promptbench;
namespace proto = promptbench::protocol;

namespace {

struct Faults {
  std::string version{proto::kVersion};
  int exit_after = -1;
  int hang_after = -1;
  int garble_after = -1;
  bool wrong_id = false;
};

std::optional<std::uint64_t> peek_id(const std::string& line) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_object() && j.contains("id") && j["id"].is_number_unsigned()) {
    return j["id"].get<std::uint64_t>();
  }
  return std::nullopt;
}

pb::BinaryMask answer(const proto::SegmentRequest& req, const std::string& mode, int tol) {
  if (mode == "boxfill") {
    const pb::Image blank = pb::Image::gray(req.width, req.height,
                                            std::vector<std::uint16_t>(
                                                static_cast<std::size_t>(req.width) *
                                                static_cast<std::size_t>(req.height)));
    pb::BoxFillOracle oracle;
    return oracle.segment({blank, {}, req.prompt, nullptr});
  }
  const pb::Image image = req.image.is_inline() ? proto::decode_inline(req.image, req.width, req.height)
                                                : pb::read_image(req.image.path);
  if (image.width != req.width || image.height != req.height) {
    pb::fail(pb::ErrorCode::kDimensionMismatch, "image does not match declared size");
  }
  pb::RegionGrowOracle oracle(tol);
  return oracle.segment({image, {}, req.prompt, nullptr});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"promptbench-seg/1 stub adapter"};
  std::string mode = "boxfill";
  int tol = 10;
  Faults faults;
  app.add_option("--mode", mode, "boxfill or floodfill")
      ->check(CLI::IsMember({"boxfill", "floodfill"}));
  app.add_option("--tol", tol, "flood fill intensity tolerance")->check(CLI::PositiveNumber);
  app.add_option("--protocol", faults.version, "version announced in the hello line");
  app.add_option("--exit-after", faults.exit_after, "exit without replying to request N+1");
  app.add_option("--hang-after", faults.hang_after, "stop replying after N requests");
  app.add_option("--garble-after", faults.garble_after, "reply with non-JSON after N requests");
  app.add_flag("--wrong-id", faults.wrong_id, "answer with id+1");
  CLI11_PARSE(app, argc, argv);

  std::ios::sync_with_stdio(false);
  std::cout << proto::encode_hello(faults.version) << std::endl;

  int served = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    if (proto::is_shutdown(line)) break;
    if (faults.exit_after >= 0 && served >= faults.exit_after) return 3;
    if (faults.hang_after >= 0 && served >= faults.hang_after) {
      for (;;) std::this_thread::sleep_for(std::chrono::seconds(60));
    }
    if (faults.garble_after >= 0 && served >= faults.garble_after) {
      std::cout << "garbage{" << std::endl;
      ++served;
      continue;
    }
    proto::Reply reply;
    try {
      const proto::SegmentRequest req = proto::decode_request(line);
      const pb::BinaryMask mask = answer(req, mode, tol);
      reply = proto::SegmentResponse{faults.wrong_id ? req.id + 1 : req.id, pb::rle_encode(mask), {}};
    } catch (const pb::Error& e) {
      reply = proto::ErrorRecord{peek_id(line), e.what()};
    }
    std::cout << proto::encode_reply(reply) << std::endl;
    ++served;
  }
  return 0;
}
