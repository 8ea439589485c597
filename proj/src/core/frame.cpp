#include "core/frame.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"

namespace mcrd {

Frame::Frame(int w, int h, double fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) fail(errc::bad_config, "frame dimensions must be positive");
  samples.assign(static_cast<size_t>(w) * h, fill);
}

uint8_t clamp_u8(double v) {
  if (v <= 0.0) return 0;
  if (v >= 255.0) return 255;
  return static_cast<uint8_t>(std::llround(v));
}

static void check_yuv_dims(int width, int height) {
  if (width <= 0 || height <= 0)
    fail(errc::bad_config, "raw 4:2:0 dimensions must be positive");
  // 4:2:0 chroma is subsampled 2x in both directions, so odd sizes have no
  // well-defined plane layout.
  if (width % 2 != 0 || height % 2 != 0)
    fail(errc::bad_config, "raw 4:2:0 requires even width and height, got " +
                               std::to_string(width) + "x" + std::to_string(height));
}

VideoSequence read_raw_yuv420(const std::string& path, int width, int height) {
  check_yuv_dims(width, height);

  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot open '" + path + "' for reading");

  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<uint64_t>(in.tellg());
  in.seekg(0, std::ios::beg);

  const uint64_t luma_bytes = static_cast<uint64_t>(width) * height;
  const uint64_t frame_bytes = luma_bytes * 3 / 2;
  if (file_size == 0 || file_size % frame_bytes != 0) {
    const uint64_t frames_below = file_size / frame_bytes;
    fail(errc::malformed_input,
         "raw 4:2:0 size mismatch for " + std::to_string(width) + "x" +
             std::to_string(height) + ": got " + std::to_string(file_size) +
             " bytes, expected a multiple of " + std::to_string(frame_bytes) +
             " (nearest whole counts: " + std::to_string(frames_below * frame_bytes) +
             " or " + std::to_string((frames_below + 1) * frame_bytes) + ")");
  }

  VideoSequence seq;
  const uint64_t n_frames = file_size / frame_bytes;
  seq.frames.reserve(n_frames);
  std::vector<uint8_t> buf(luma_bytes);
  for (uint64_t f = 0; f < n_frames; ++f) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(luma_bytes));
    if (!in) fail(errc::io, "short read on '" + path + "'");
    Frame frame(width, height);
    for (uint64_t i = 0; i < luma_bytes; ++i) frame.samples[i] = buf[i];
    seq.frames.push_back(std::move(frame));
    in.seekg(static_cast<std::streamoff>(luma_bytes / 2), std::ios::cur);  // skip U and V
  }
  return seq;
}

void write_raw_yuv420(const VideoSequence& seq, const std::string& path) {
  if (seq.frames.empty()) fail(errc::bad_config, "refusing to write empty sequence");
  check_yuv_dims(seq.width(), seq.height());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io, "cannot open '" + path + "' for writing");

  const size_t luma_bytes = static_cast<size_t>(seq.width()) * seq.height();
  std::vector<uint8_t> buf(luma_bytes);
  const std::vector<uint8_t> chroma(luma_bytes / 2, 128);
  for (const Frame& frame : seq.frames) {
    if (frame.width != seq.width() || frame.height != seq.height())
      fail(errc::shape_mismatch, "sequence frames disagree on dimensions");
    for (size_t i = 0; i < luma_bytes; ++i) buf[i] = clamp_u8(frame.samples[i]);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(luma_bytes));
    out.write(reinterpret_cast<const char*>(chroma.data()),
              static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) fail(errc::io, "write failed on '" + path + "'");
}

}  // namespace mcrd
