#include "core/activity.hpp"

#include <cmath>

#include <json.hpp>

#include "core/errors.hpp"

namespace mcrd {

BlockGrid BlockGrid::for_frame(int frame_w, int frame_h, int block_w, int block_h) {
  if (block_w <= 0 || block_h <= 0) fail(errc::bad_config, "block dimensions must be positive");
  if (block_w > frame_w || block_h > frame_h)
    fail(errc::bad_config, "block " + std::to_string(block_w) + "x" + std::to_string(block_h) +
                               " larger than frame " + std::to_string(frame_w) + "x" +
                               std::to_string(frame_h));
  BlockGrid grid;
  grid.block_w = block_w;
  grid.block_h = block_h;
  grid.cols = frame_w / block_w;
  grid.rows = frame_h / block_h;
  return grid;
}

int ActivityMap::active_blocks() const {
  int n = 0;
  for (uint8_t label : labels) n += label;
  return n;
}

std::string ActivityMap::to_json() const {
  nlohmann::ordered_json doc;
  doc["grid"] = {{"block_w", grid.block_w},
                 {"block_h", grid.block_h},
                 {"cols", grid.cols},
                 {"rows", grid.rows}};
  nlohmann::ordered_json rows_out = nlohmann::ordered_json::array();
  for (int by = 0; by < grid.rows; ++by) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int bx = 0; bx < grid.cols; ++bx) row.push_back(block_active(bx, by) ? 1 : 0);
    rows_out.push_back(std::move(row));
  }
  doc["labels"] = std::move(rows_out);
  doc["lambda_m"] = lambda_m;
  return doc.dump(2) + "\n";
}

Frame difference_image(const Frame& anchor, const Frame& target) {
  if (!anchor.same_size(target))
    fail(errc::shape_mismatch, "difference_image: frame dimensions differ");
  Frame diff(anchor.width, anchor.height);
  for (size_t i = 0; i < diff.samples.size(); ++i)
    diff.samples[i] = std::abs(target.samples[i] - anchor.samples[i]);
  return diff;
}

ActivityMap classify(const Frame& diff, const BlockGrid& grid, const Thresholds& th) {
  if (grid.cols <= 0 || grid.rows <= 0) fail(errc::bad_config, "empty block grid");
  if (diff.width < grid.usable_width() || diff.height < grid.usable_height())
    fail(errc::shape_mismatch, "classify: frame smaller than grid coverage");
  if (th.t_p > grid.block_area()) fail(errc::bad_config, "t_p exceeds block area");

  ActivityMap map;
  map.grid = grid;
  map.frame_width = diff.width;
  map.frame_height = diff.height;
  map.labels.assign(static_cast<size_t>(grid.block_count()), 0);
  map.pixel_mask.assign(diff.samples.size(), 0);

  int active = 0;
  for (int by = 0; by < grid.rows; ++by) {
    for (int bx = 0; bx < grid.cols; ++bx) {
      int count = 0;
      for (int y = by * grid.block_h; y < (by + 1) * grid.block_h; ++y) {
        for (int x = bx * grid.block_w; x < (bx + 1) * grid.block_w; ++x) {
          if (diff.at(x, y) > th.t_g) {
            map.pixel_mask[static_cast<size_t>(y) * diff.width + x] = 1;
            ++count;
          }
        }
      }
      if (count > th.t_p) {
        map.labels[static_cast<size_t>(by) * grid.cols + bx] = 1;
        ++active;
      }
    }
  }
  map.lambda_m = static_cast<double>(active) / grid.block_count();
  return map;
}

}  // namespace mcrd
