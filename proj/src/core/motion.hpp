#ifndef MCRD_CORE_MOTION_HPP
#define MCRD_CORE_MOTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "core/activity.hpp"
#include "core/frame.hpp"

namespace mcrd {

// Integer-pixel displacement. The vector points from a target block's origin
// to the matching block in the anchor frame: prediction(x) = anchor(x + mv).
struct MotionVector {
  int dx = 0;
  int dy = 0;
  bool operator==(const MotionVector&) const = default;
};

struct SearchResult {
  MotionVector mv;
  double cost = 0.0;  // sum of squared differences
};

// Per-block displacements; a vector is present exactly for active blocks,
// inactive blocks predict from the co-located anchor block.
struct MotionField {
  BlockGrid grid;
  std::vector<std::optional<MotionVector>> vectors;  // rows * cols
  int search_range = 15;
  int b_m = 10;  // bits spent per motion vector

  // {"grid": {...}, "search_range": ..., "b_m": ..., "vectors": [[[dx,dy]|null,...],...]}
  std::string to_json() const;
};

// Bits of a fixed-length code covering both components of a vector with
// |dx|,|dy| <= search_range.
int default_mv_bits(int search_range);

// Two-stage diamond search seeded at zero displacement: the 9-point large
// diamond iterates until its minimum stays at the center, then one 5-point
// small diamond refines. Candidates that leave the anchor frame or exceed
// search_range are skipped. Ties break toward the smallest |dx|+|dy|, then
// smallest dy, then smallest dx.
SearchResult diamond_search(const Frame& anchor, const Frame& target, int block_x, int block_y,
                            const BlockGrid& grid, int search_range);

// Runs diamond_search for every active block. mv_bits <= 0 selects the
// fixed-length default for the search range.
MotionField estimate_motion(const Frame& anchor, const Frame& target, const ActivityMap& map,
                            int search_range, int mv_bits = 0);

// Assembles the prediction frame: each covered block is the anchor block at
// origin + mv (zero displacement when no vector); pixels outside the grid
// coverage copy the anchor.
Frame motion_compensate(const Frame& anchor, const MotionField& field);

// Signed residuals, grouped block by block in grid order with a row-major
// scan inside each block, so later statistics can avoid pairing samples
// across block boundaries.
struct ResidualSet {
  std::vector<double> dfd_samples;  // active blocks: target - compensated anchor
  std::vector<double> fd_samples;   // inactive blocks: target - anchor
};

ResidualSet extract_residuals(const Frame& anchor, const Frame& target, const ActivityMap& map,
                              const MotionField& field);

}  // namespace mcrd

#endif
