#ifndef MCRD_CORE_ACTIVITY_HPP
#define MCRD_CORE_ACTIVITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/frame.hpp"

namespace mcrd {

// Classification thresholds: a pixel is active when its absolute frame
// difference exceeds t_g; a block is active when its active-pixel count
// exceeds t_p. Both comparisons are strict.
struct Thresholds {
  double t_g = 15.0;
  int t_p = 32;
};

struct BlockGrid {
  int block_w = 0;
  int block_h = 0;
  int cols = 0;
  int rows = 0;

  // Largest grid of whole blocks that fits the frame; the right/bottom
  // remainder is cropped from all statistics.
  static BlockGrid for_frame(int frame_w, int frame_h, int block_w, int block_h);

  int usable_width() const { return cols * block_w; }
  int usable_height() const { return rows * block_h; }
  int block_count() const { return cols * rows; }
  int block_area() const { return block_w * block_h; }
  bool operator==(const BlockGrid&) const = default;
};

struct ActivityMap {
  BlockGrid grid;
  int frame_width = 0;
  int frame_height = 0;
  std::vector<uint8_t> labels;      // rows * cols, 1 = active block
  std::vector<uint8_t> pixel_mask;  // frame_width * frame_height, 1 = active pixel
  double lambda_m = 0.0;            // fraction of active blocks

  bool block_active(int bx, int by) const {
    return labels[static_cast<size_t>(by) * grid.cols + bx] != 0;
  }
  int active_blocks() const;

  // {"grid": {...}, "labels": [[0|1,...],...], "lambda_m": ...}
  std::string to_json() const;
};

// Per-pixel absolute difference |target - anchor|.
Frame difference_image(const Frame& anchor, const Frame& target);

// Labels each grid block of the difference image as active or inactive.
// Pixels outside the grid coverage are never active.
ActivityMap classify(const Frame& diff, const BlockGrid& grid, const Thresholds& th);

}  // namespace mcrd

#endif
