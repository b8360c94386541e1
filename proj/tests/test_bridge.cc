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

#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "promptbench/error.hpp"
#include "promptbench/external.hpp"
#include "promptbench/protocol.hpp"
#include "promptbench/rle.hpp"
#include "promptbench/segmenter.hpp"

using namespace promptbench;
namespace proto = promptbench::protocol;

namespace {

const std::string kStub = std::string(PROMPTBENCH_TOOLS) + "/stub_adapter";

ErrorCode code_of(auto&& fn, std::string* detail = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (detail) *detail = e.detail();
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

Image blank(int w, int h) {
  return Image::gray(w, h, std::vector<std::uint16_t>(static_cast<std::size_t>(w * h), 0));
}

Prompt box_prompt(BBox b) {
  Prompt p;
  p.box = b;
  return p;
}

BackendOptions quick(int ms = 2000) {
  BackendOptions o;
  o.timeout = std::chrono::milliseconds(ms);
  return o;
}

// Two regions: left half 40, right half 200, with a 100-valued bar in row 0.
Image two_regions(int w, int h) {
  std::vector<std::uint16_t> s(static_cast<std::size_t>(w * h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) s[static_cast<std::size_t>(y * w + x)] = x < w / 2 ? 40 : 200;
  }
  for (int x = 0; x < w; ++x) s[static_cast<std::size_t>(x)] = 100;
  return Image::gray(w, h, std::move(s));
}

}  // namespace

// ---- rle

TEST(Rle, Examples) {
  EXPECT_EQ(rle_encode(BinaryMask(4, 1, {1, 1, 0, 1})), (std::vector<std::uint32_t>{0, 2, 1, 1}));
  EXPECT_EQ(rle_encode(BinaryMask::filled(2, 2, false)), (std::vector<std::uint32_t>{4}));
  EXPECT_EQ(rle_encode(BinaryMask::filled(2, 2, true)), (std::vector<std::uint32_t>{0, 4}));
  EXPECT_EQ(rle_decode(std::vector<std::uint32_t>{0, 2, 1, 1}, 4, 1), BinaryMask(4, 1, {1, 1, 0, 1}));
}

TEST(Rle, LengthMismatch) {
  EXPECT_EQ(code_of([] { rle_decode(std::vector<std::uint32_t>{3}, 2, 2); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(code_of([] { rle_decode(std::vector<std::uint32_t>{3, 3}, 2, 2); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(code_of([] { rle_decode(std::vector<std::uint32_t>{}, 2, 2); }), ErrorCode::kLengthMismatch);
}

TEST(Rle, RoundTripOnRandomMasks) {
  std::mt19937_64 gen(51);
  for (int i = 0; i < 1000; ++i) {
    const auto m = oracle::random_mask(gen, 1 + static_cast<int>(gen() % 40), 1 + static_cast<int>(gen() % 40),
                                       static_cast<double>(gen() % 101) / 100.0);
    const auto runs = rle_encode(m);
    std::uint64_t total = 0;
    for (auto r : runs) total += r;
    ASSERT_EQ(total, m.size());
    for (std::size_t k = 1; k < runs.size(); ++k) ASSERT_GT(runs[k], 0u);
    ASSERT_EQ(rle_decode(runs, m.width(), m.height()), m);
  }
}

// ---- wire records

TEST(Protocol, RequestRoundTripAndKeyOrder) {
  proto::SegmentRequest r;
  r.id = 7;
  r.width = 4;
  r.height = 3;
  r.image.path = "/data/p.png";
  r.prompt.box = BBox{0, 1, 2, 2};
  r.prompt.points = {{{1, 1}, Polarity::kPositive}, {{3, 0}, Polarity::kNegative}};
  const auto line = proto::encode_request(r);
  EXPECT_EQ(line,
            R"({"box":[0,1,2,2],"height":3,"id":7,"image":{"path":"/data/p.png"},"points":[[1,1,1],[3,0,0]],"type":"segment","width":4})");
  const auto back = proto::decode_request(line);
  EXPECT_EQ(back.id, 7u);
  EXPECT_EQ(back.image.path, "/data/p.png");
  EXPECT_EQ(back.prompt, r.prompt);
}

TEST(Protocol, RequestValidation) {
  const char* bad[] = {
      R"({"box":null,"height":4,"id":1,"image":{"path":"x"},"points":[[4,0,1]],"type":"segment","width":4})",
      R"({"box":null,"height":4,"id":1,"image":{"path":"x"},"points":[],"type":"segment","width":4})",
      R"({"box":[0,0,4,0],"height":4,"id":1,"image":{"path":"x"},"points":[],"type":"segment","width":4})",
      R"({"box":null,"height":4,"id":1,"image":{"path":"x"},"points":[[1,1,2]],"type":"segment","width":4})",
      R"({"box":null,"height":4,"image":{"path":"x"},"points":[[1,1,1]],"type":"segment","width":4})",
      R"({"box":null,"height":0,"id":1,"image":{"path":"x"},"points":[[0,0,1]],"type":"segment","width":4})",
      R"({"type":"mask"})",
      R"([1,2])",
      "garbage",
  };
  for (const char* line : bad) EXPECT_EQ(code_of([&] { proto::decode_request(line); }), ErrorCode::kProtocolError) << line;
}

TEST(Protocol, Replies) {
  EXPECT_EQ(proto::encode_reply(proto::SegmentResponse{3, {5, 2, 2, 2, 5}, {}}),
            R"({"id":3,"rle":[5,2,2,2,5],"type":"mask"})");
  EXPECT_EQ(proto::encode_reply(proto::ErrorRecord{std::nullopt, "bad"}), R"({"id":null,"message":"bad","type":"error"})");
  const auto ok = proto::decode_reply(R"({"id":9,"latency_ms":1.5,"rle":[16],"type":"mask"})");
  ASSERT_TRUE(std::holds_alternative<proto::SegmentResponse>(ok));
  EXPECT_EQ(std::get<proto::SegmentResponse>(ok).latency_ms, 1.5);
  const auto err = proto::decode_reply(R"({"id":2,"message":"x","type":"error"})");
  EXPECT_EQ(std::get<proto::ErrorRecord>(err).id, 2u);
  EXPECT_EQ(code_of([] { proto::decode_reply(R"({"id":2,"type":"hello"})"); }), ErrorCode::kProtocolError);
  EXPECT_EQ(proto::decode_hello(proto::encode_hello()), "promptbench-seg/1");
  EXPECT_TRUE(proto::is_shutdown(proto::encode_shutdown()));
  EXPECT_FALSE(proto::is_shutdown(proto::encode_hello()));
}

TEST(Protocol, Base64) {
  const std::string text = "Many hands make light work.";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  EXPECT_EQ(proto::base64_encode(bytes), "TWFueSBoYW5kcyBtYWtlIGxpZ2h0IHdvcmsu");
  for (std::size_t n = 0; n < 8; ++n) {
    const std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(n));
    EXPECT_EQ(proto::base64_decode(proto::base64_encode(part)), part);
  }
  EXPECT_EQ(proto::base64_encode(std::vector<std::uint8_t>{'M', 'a'}), "TWE=");
  EXPECT_THROW(proto::base64_decode("TWE"), Error);
  EXPECT_THROW(proto::base64_decode("T=E="), Error);
  EXPECT_THROW(proto::base64_decode("TW!="), Error);
}

TEST(Protocol, InlineImages) {
  std::vector<std::uint16_t> g16{0, 1, 4095, 65535, 256, 7};
  std::vector<std::uint16_t> rgb(18);
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = static_cast<std::uint16_t>(i * 13);
  for (const Image& img : {Image::gray(3, 2, {0, 10, 20, 30, 40, 255}), Image::gray(3, 2, g16, 65535),
                           Image::rgb(3, 2, rgb)}) {
    const auto ref = proto::inline_image(img);
    const auto back = proto::decode_inline(ref, 3, 2);
    EXPECT_EQ(back.samples, img.samples) << ref.encoding;
    EXPECT_EQ(back.channels, img.channels);
    EXPECT_THROW(proto::decode_inline(ref, 2, 2), Error);
  }
}

// ---- oracles

TEST(Oracles, IdentityEchoesGroundTruth) {
  std::mt19937_64 gen(52);
  const auto gt = oracle::random_mask(gen, 9, 7, 0.4);
  const auto img = blank(9, 7);
  const auto prompt = box_prompt({0, 0, 1, 1});
  IdentityOracle o;
  EXPECT_EQ(o.segment({img, {}, prompt, &gt}), gt);
  EXPECT_THROW(o.segment({img, {}, prompt, nullptr}), Error);
}

TEST(Oracles, BoxFill) {
  const auto img = blank(4, 4);
  const auto prompt = box_prompt({1, 1, 2, 2});
  BoxFillOracle o;
  const auto m = o.segment({img, {}, prompt, nullptr});
  EXPECT_EQ(m.foreground_count(), 4u);
  EXPECT_EQ(m, oracle::box_mask(4, 4, {1, 1, 2, 2}));
  Prompt points_only;
  points_only.points = {{{1, 1}, Polarity::kPositive}};
  EXPECT_TRUE(o.segment({img, {}, points_only, nullptr}).empty());
}

TEST(Oracles, PointDisk) {
  const auto img = blank(11, 11);
  Prompt p;
  p.points = {{{5, 5}, Polarity::kPositive}, {{7, 5}, Polarity::kNegative}};
  PointDiskOracle o(2);
  const auto m = o.segment({img, {}, p, nullptr});
  for (int y = 0; y < 11; ++y) {
    for (int x = 0; x < 11; ++x) {
      const bool in_pos = (x - 5) * (x - 5) + (y - 5) * (y - 5) <= 4;
      const bool in_neg = (x - 7) * (x - 7) + (y - 5) * (y - 5) <= 4;
      EXPECT_EQ(m.at(x, y), in_pos && !in_neg) << x << "," << y;
    }
  }
  EXPECT_THROW(PointDiskOracle(0), Error);
}

TEST(Oracles, RegionGrowRecoversSeedRegion) {
  const auto img = two_regions(10, 6);
  Prompt p;
  p.points = {{{2, 3}, Polarity::kPositive}};
  RegionGrowOracle o(10);
  const auto m = o.segment({img, {}, p, nullptr});
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 10; ++x) EXPECT_EQ(m.at(x, y), y > 0 && x < 5);
  }
  const auto ref = oracle::flood(img, {2, 3}, 10, {0, 0, 9, 5});
  EXPECT_EQ(m, BinaryMask(10, 6, ref));
}

TEST(Oracles, RegionGrowMatchesBreadthFirstOracle) {
  std::mt19937_64 gen(53);
  for (int i = 0; i < 200; ++i) {
    const int w = 4 + static_cast<int>(gen() % 30), h = 4 + static_cast<int>(gen() % 30);
    std::vector<std::uint16_t> s(static_cast<std::size_t>(w * h));
    for (auto& v : s) v = static_cast<std::uint16_t>(gen() % 64);
    const Image img = Image::gray(w, h, s);
    const int tol = 5 + static_cast<int>(gen() % 30);
    Prompt p;
    const int n = 1 + static_cast<int>(gen() % 4);
    for (int k = 0; k < n; ++k) {
      p.points.push_back({{static_cast<int>(gen() % static_cast<unsigned>(w)), static_cast<int>(gen() % static_cast<unsigned>(h))},
                          gen() % 3 == 0 ? Polarity::kNegative : Polarity::kPositive});
    }
    if (gen() % 2) p.box = BBox{0, 0, w / 2 + 1, h - 1};
    const BBox clip = p.box.value_or(BBox{0, 0, w - 1, h - 1});
    std::vector<std::uint8_t> pos(s.size(), 0), neg(s.size(), 0);
    for (const auto& pt : p.points) {
      if (!clip.contains(pt.point)) continue;
      const auto r = oracle::flood(img, pt.point, tol, clip);
      auto& dst = pt.polarity == Polarity::kPositive ? pos : neg;
      for (std::size_t k = 0; k < r.size(); ++k) dst[k] |= r[k];
    }
    for (std::size_t k = 0; k < pos.size(); ++k) pos[k] = pos[k] && !neg[k];
    RegionGrowOracle o(tol);
    ASSERT_EQ(o.segment({img, {}, p, nullptr}), BinaryMask(w, h, pos)) << i;
  }
}

TEST(BackendSpec, ParseAndCanonical) {
  for (const char* s : {"oracle:identity", "oracle:boxfill", "oracle:pointdisk:r=3", "oracle:regiongrow:tol=25"}) {
    EXPECT_EQ(BackendSpec::parse(s).canonical(), s);
  }
  const auto ext = BackendSpec::parse("external:python3 adapter.py --mode 'stub boxfill'");
  EXPECT_EQ(ext.kind, BackendSpec::Kind::kExternal);
  EXPECT_EQ(ext.command, (std::vector<std::string>{"python3", "adapter.py", "--mode", "stub boxfill"}));
  for (const char* s : {"oracle:pointdisk:r=0", "oracle:regiongrow", "oracle:sam", "external:", "sam"}) {
    EXPECT_THROW(BackendSpec::parse(s), Error) << s;
  }
  EXPECT_EQ(split_command_line(R"(a "b c"  d'e f')"), (std::vector<std::string>{"a", "b c", "de f"}));
  EXPECT_THROW(split_command_line("a 'b"), Error);
}

// ---- external adapter process

TEST(External, HandshakeAndBoxFill) {
  auto s = spawn_external({kStub, "--mode", "boxfill"}, quick());
  EXPECT_EQ(s->hello_line(), R"({"protocol":"promptbench-seg/1","type":"hello"})");
  const auto img = blank(4, 4);
  const auto prompt = box_prompt({1, 1, 2, 2});
  const auto m = s->segment({img, {}, prompt, nullptr});
  EXPECT_EQ(m, oracle::box_mask(4, 4, {1, 1, 2, 2}));
  EXPECT_EQ(s->last_request_id(), 1u);
  s->segment({img, {}, prompt, nullptr});
  EXPECT_EQ(s->last_request_id(), 2u);
}

TEST(External, FloodFillReadsImagePath) {
  oracle::TempDir tmp("ext-path");
  const auto img = two_regions(10, 6);
  write_image(img, tmp / "img.png");
  auto s = spawn_external({kStub, "--mode", "floodfill", "--tol", "10"}, quick());
  Prompt p;
  p.points = {{{2, 3}, Polarity::kPositive}};
  RegionGrowOracle local(10);
  EXPECT_EQ(s->segment({img, tmp / "img.png", p, nullptr}), local.segment({img, {}, p, nullptr}));
  // Inline transfer when there is no file.
  EXPECT_EQ(s->segment({img, {}, p, nullptr}), local.segment({img, {}, p, nullptr}));
}

TEST(External, AdapterErrorRecordKeepsSessionAlive) {
  auto s = spawn_external({kStub}, quick());
  const auto reply = s->exchange(
      R"({"box":null,"height":4,"id":1,"image":{"path":"x"},"points":[[4,0,1]],"type":"segment","width":4})");
  const auto rec = proto::decode_reply(reply);
  ASSERT_TRUE(std::holds_alternative<proto::ErrorRecord>(rec));
  EXPECT_EQ(std::get<proto::ErrorRecord>(rec).id, 1u);
  EXPECT_TRUE(s->running());
  const auto img = blank(4, 4);
  const auto prompt = box_prompt({0, 0, 0, 0});
  EXPECT_EQ(s->segment({img, {}, prompt, nullptr}).foreground_count(), 1u);
}

TEST(External, SpawnFailure) {
  EXPECT_EQ(code_of([] { spawn_external({"/nonexistent/adapter"}, quick()); }), ErrorCode::kSpawnFailed);
}

TEST(External, WrongVersionIsHandshakeMismatch) {
  std::string detail;
  EXPECT_EQ(code_of([] { spawn_external({kStub, "--protocol", "promptbench-seg/0"}, quick()); }, &detail),
            ErrorCode::kHandshakeMismatch);
  EXPECT_NE(detail.find("promptbench-seg/0"), std::string::npos);
  // A program that never prints a hello.
  EXPECT_EQ(code_of([] { spawn_external({"/bin/true"}, quick(500)); }), ErrorCode::kHandshakeMismatch);
}

TEST(External, CrashNamesTheRequestAndRespawns) {
  auto s = spawn_external({kStub, "--exit-after", "2"}, quick());
  const auto img = blank(4, 4);
  const auto prompt = box_prompt({0, 0, 1, 1});
  s->segment({img, {}, prompt, nullptr});
  s->segment({img, {}, prompt, nullptr});
  std::string detail;
  EXPECT_EQ(code_of([&] { s->segment({img, {}, prompt, nullptr}); }, &detail), ErrorCode::kBackendCrashed);
  EXPECT_NE(detail.find("request 3"), std::string::npos) << detail;
  EXPECT_FALSE(s->running());
  // Next call starts a fresh child.
  EXPECT_EQ(s->segment({img, {}, prompt, nullptr}).foreground_count(), 4u);
}

TEST(External, HungAdapterTimesOut) {
  auto s = spawn_external({kStub, "--hang-after", "0"}, quick(300));
  const auto img = blank(4, 4);
  const auto prompt = box_prompt({0, 0, 1, 1});
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] { s->segment({img, {}, prompt, nullptr}); }), ErrorCode::kTimeout);
  const auto waited = std::chrono::steady_clock::now() - start;
  EXPECT_GE(waited, std::chrono::milliseconds(300));
  EXPECT_LT(waited, std::chrono::seconds(5));
  EXPECT_FALSE(s->running());
}

TEST(External, GarbledAndMismatchedReplies) {
  const auto img = blank(4, 4);
  const auto prompt = box_prompt({0, 0, 1, 1});
  auto garbled = spawn_external({kStub, "--garble-after", "0"}, quick());
  EXPECT_EQ(code_of([&] { garbled->segment({img, {}, prompt, nullptr}); }), ErrorCode::kProtocolError);
  auto wrong = spawn_external({kStub, "--wrong-id"}, quick());
  std::string detail;
  EXPECT_EQ(code_of([&] { wrong->segment({img, {}, prompt, nullptr}); }, &detail), ErrorCode::kProtocolError);
  EXPECT_NE(detail.find("id 2"), std::string::npos) << detail;
}

TEST(External, MakeBackendFromSpec) {
  const auto b = make_backend(BackendSpec::parse("external:" + kStub + " --mode boxfill"), quick());
  EXPECT_EQ(b->name(), "external:" + kStub + " --mode boxfill");
  EXPECT_EQ(make_backend(BackendSpec::parse("oracle:regiongrow:tol=7"))->name(), "oracle:regiongrow:tol=7");
}
