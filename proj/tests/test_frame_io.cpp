#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"
#include "core/frame.hpp"
#include "core/synth.hpp"
#include "oracles.hpp"

using namespace mcrd;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / (std::string("mcrd_") + name);
}

void write_bytes(const fs::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  REQUIRE(out.good());
}

std::vector<uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("read_raw_yuv420 extracts luminance planes") {
  const fs::path path = temp_file("two_frames_16x16.yuv");
  // 2 frames of 16x16: 256 Y bytes of 128 then 128 chroma bytes each.
  std::vector<uint8_t> bytes;
  for (int f = 0; f < 2; ++f) {
    bytes.insert(bytes.end(), 256, 128);
    bytes.insert(bytes.end(), 128, 77);  // chroma content must be ignored
  }
  REQUIRE(bytes.size() == 768);
  write_bytes(path, bytes);

  const VideoSequence seq = read_raw_yuv420(path.string(), 16, 16);
  CHECK(seq.frames.size() == 2);
  for (const Frame& frame : seq.frames) {
    CHECK(frame.width == 16);
    CHECK(frame.height == 16);
    REQUIRE(frame.samples.size() == 256);
    for (double s : frame.samples) CHECK(s == 128.0);
  }
  fs::remove(path);
}

TEST_CASE("read_raw_yuv420 rejects truncated files naming byte counts") {
  const fs::path path = temp_file("truncated.yuv");
  write_bytes(path, std::vector<uint8_t>(767, 0));
  try {
    read_raw_yuv420(path.string(), 16, 16);
    FAIL("expected malformed-input error");
  } catch (const error& e) {
    CHECK(e.code() == errc::malformed_input);
    const std::string what = e.what();
    CHECK(what.find("767") != std::string::npos);
    CHECK(what.find("384") != std::string::npos);
  }
  fs::remove(path);
}

TEST_CASE("read_raw_yuv420 frame count follows the 4:2:0 layout") {
  // 4 frames of 8x8: 4 * (64 + 32) = 384 bytes.
  const fs::path path = temp_file("four_frames_8x8.yuv");
  std::vector<uint8_t> bytes(384);
  for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<uint8_t>(i & 0xff);
  write_bytes(path, bytes);
  const VideoSequence seq = read_raw_yuv420(path.string(), 8, 8);
  CHECK(seq.frames.size() == 4);
  // Y plane of frame 1 starts right after frame 0's chroma (96 bytes in).
  CHECK(seq.frames[1].samples[0] == static_cast<double>(bytes[96]));
  fs::remove(path);
}

TEST_CASE("read_raw_yuv420 requires even dimensions") {
  CHECK_THROWS_AS(read_raw_yuv420("whatever.yuv", 15, 16), error);
  CHECK_THROWS_AS(read_raw_yuv420("whatever.yuv", 16, 15), error);
}

TEST_CASE("read_raw_yuv420 reports unreadable paths as io errors") {
  try {
    read_raw_yuv420("/nonexistent/definitely_missing.yuv", 16, 16);
    FAIL("expected io error");
  } catch (const error& e) {
    CHECK(e.code() == errc::io);
  }
}

TEST_CASE("constant synthesis is flat") {
  SyntheticSpec spec;
  spec.kind = SynthKind::constant;
  spec.mean = 64.0;
  const VideoSequence seq = synthesize(spec, 32, 24, 3);
  REQUIRE(seq.frames.size() == 3);
  for (const Frame& f : seq.frames)
    for (double s : f.samples) CHECK(s == 64.0);
  CHECK(oracles::naive_variance(seq.frames[0].samples) == 0.0);
}

TEST_CASE("ar1 synthesis hits the requested scan correlation and variance") {
  SyntheticSpec spec;
  spec.kind = SynthKind::ar1_field;
  spec.rho = 0.9;
  spec.sigma2 = 25.0;
  spec.seed = 42;
  const VideoSequence seq = synthesize(spec, 512, 512, 1);
  const Frame& f = seq.frames[0];
  CHECK(oracles::scan_lag1_correlation(f) == doctest::Approx(0.9).epsilon(0.023));
  CHECK(oracles::naive_variance(f.samples) == doctest::Approx(25.0).epsilon(0.05));
}

TEST_CASE("ar1 with rho 0 decorrelates") {
  SyntheticSpec spec;
  spec.kind = SynthKind::ar1_field;
  spec.rho = 0.0;
  spec.sigma2 = 25.0;
  spec.seed = 7;
  const VideoSequence seq = synthesize(spec, 512, 512, 1);
  CHECK(std::abs(oracles::scan_lag1_correlation(seq.frames[0])) < 0.02);
}

TEST_CASE("moving-rect displaces the rectangle by (dx, dy) per frame") {
  SyntheticSpec spec;
  spec.kind = SynthKind::moving_rect;
  spec.mean = 100.0;
  spec.motion_dx = 3;
  spec.motion_dy = 2;
  const VideoSequence seq = synthesize(spec, 64, 64, 2);

  auto rect_origin = [&](const Frame& f) {
    int min_x = f.width, min_y = f.height;
    for (int y = 0; y < f.height; ++y)
      for (int x = 0; x < f.width; ++x)
        if (f.at(x, y) > 150.0) {
          min_x = std::min(min_x, x);
          min_y = std::min(min_y, y);
        }
    return std::pair{min_x, min_y};
  };
  const auto [x1, y1] = rect_origin(seq.frames[0]);
  const auto [x2, y2] = rect_origin(seq.frames[1]);
  CHECK(x2 == x1 + 3);
  CHECK(y2 == y1 + 2);
}

TEST_CASE("same seed reproduces identical bytes, different seed does not") {
  SyntheticSpec spec;
  spec.kind = SynthKind::white_noise;
  spec.sigma2 = 100.0;
  spec.seed = 5;
  const VideoSequence a = synthesize(spec, 32, 32, 2);
  const VideoSequence b = synthesize(spec, 32, 32, 2);
  CHECK(a.frames[1].samples == b.frames[1].samples);
  spec.seed = 6;
  const VideoSequence c = synthesize(spec, 32, 32, 2);
  CHECK(a.frames[0].samples != c.frames[0].samples);
}

TEST_CASE("write-read round trip is bit exact after clamping") {
  SyntheticSpec spec;
  spec.kind = SynthKind::ar1_field;
  spec.rho = 0.8;
  spec.sigma2 = 400.0;  // wide enough to exercise clamping at 0 and 255
  spec.mean = 128.0;
  spec.seed = 11;
  const VideoSequence original = synthesize(spec, 32, 32, 3);

  const fs::path a = temp_file("roundtrip_a.yuv");
  const fs::path b = temp_file("roundtrip_b.yuv");
  write_raw_yuv420(original, a.string());
  const VideoSequence reread = read_raw_yuv420(a.string(), 32, 32);
  write_raw_yuv420(reread, b.string());
  CHECK(read_bytes(a) == read_bytes(b));

  // And the reread samples are exactly the clamped originals.
  for (size_t f = 0; f < original.frames.size(); ++f)
    for (size_t i = 0; i < original.frames[f].samples.size(); ++i)
      CHECK(reread.frames[f].samples[i] ==
            static_cast<double>(clamp_u8(original.frames[f].samples[i])));
  fs::remove(a);
  fs::remove(b);
}

TEST_CASE("synthesize validates its spec") {
  SyntheticSpec spec;
  spec.kind = SynthKind::ar1_field;
  spec.rho = 1.0;
  CHECK_THROWS_AS(synthesize(spec, 16, 16, 1), error);
  spec.rho = 0.5;
  spec.sigma2 = -1.0;
  CHECK_THROWS_AS(synthesize(spec, 16, 16, 1), error);
  spec.sigma2 = 1.0;
  CHECK_THROWS_AS(synthesize(spec, 16, 16, 0), error);
}

TEST_CASE("synthetic spec JSON parsing") {
  const SyntheticSpec spec = SyntheticSpec::from_json(
      R"({"kind":"moving-rect","mean":50,"motion":[3,-2],"seed":9})");
  CHECK(spec.kind == SynthKind::moving_rect);
  CHECK(spec.mean == 50.0);
  CHECK(spec.motion_dx == 3);
  CHECK(spec.motion_dy == -2);
  CHECK(spec.seed == 9);

  CHECK_THROWS_AS(SyntheticSpec::from_json("not json"), error);
  CHECK_THROWS_AS(SyntheticSpec::from_json(R"({"rho":0.5})"), error);
  CHECK_THROWS_AS(SyntheticSpec::from_json(R"({"kind":"fractal"})"), error);
  CHECK_THROWS_AS(SyntheticSpec::from_json(R"({"kind":"ar1-field","rho":1.5})"), error);

  // to_json round trip
  const SyntheticSpec back = SyntheticSpec::from_json(spec.to_json());
  CHECK(back.kind == spec.kind);
  CHECK(back.motion_dx == spec.motion_dx);
}
