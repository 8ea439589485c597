#ifndef MCRD_CORE_FRAME_HPP
#define MCRD_CORE_FRAME_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mcrd {

// A single luminance plane. Samples are real-valued; conversion to 8 bits
// happens only at raw-file boundaries.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<double> samples;  // row-major, width * height

  Frame() = default;
  Frame(int w, int h, double fill = 0.0);

  double at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
  double& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }
  bool same_size(const Frame& other) const {
    return width == other.width && height == other.height;
  }
};

struct VideoSequence {
  std::vector<Frame> frames;
  double frame_rate = 30.0;  // metadata only

  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
};

uint8_t clamp_u8(double v);

// Reads the luminance plane of every frame in a raw planar 4:2:0 file
// (Y then U then V per frame, 8 bits per sample). Chroma bytes are skipped.
// Width and height must be even; the file size must be an exact multiple of
// 1.5 * width * height bytes.
VideoSequence read_raw_yuv420(const std::string& path, int width, int height);

// Writes a sequence as raw planar 4:2:0. Y samples are rounded and clamped
// to [0,255]; both chroma planes are filled with 128.
void write_raw_yuv420(const VideoSequence& seq, const std::string& path);

}  // namespace mcrd

#endif
