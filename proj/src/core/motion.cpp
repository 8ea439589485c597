#include "core/motion.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "core/errors.hpp"

namespace mcrd {

int default_mv_bits(int search_range) {
  if (search_range < 0) fail(errc::bad_config, "search range must be >= 0");
  if (search_range == 0) return 0;
  const int span = 2 * search_range + 1;
  int bits = 0;
  while ((1 << bits) < span) ++bits;
  return 2 * bits;
}

std::string MotionField::to_json() const {
  nlohmann::ordered_json doc;
  doc["grid"] = {{"block_w", grid.block_w},
                 {"block_h", grid.block_h},
                 {"cols", grid.cols},
                 {"rows", grid.rows}};
  doc["search_range"] = search_range;
  doc["b_m"] = b_m;
  nlohmann::ordered_json rows_out = nlohmann::ordered_json::array();
  for (int by = 0; by < grid.rows; ++by) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int bx = 0; bx < grid.cols; ++bx) {
      const auto& v = vectors[static_cast<size_t>(by) * grid.cols + bx];
      if (v)
        row.push_back({v->dx, v->dy});
      else
        row.push_back(nullptr);
    }
    rows_out.push_back(std::move(row));
  }
  doc["vectors"] = std::move(rows_out);
  return doc.dump(2) + "\n";
}

namespace {

struct Candidate {
  MotionVector mv;
  double cost = std::numeric_limits<double>::infinity();
};

// cost first, then |dx|+|dy|, then dy, then dx
bool better(const Candidate& a, const Candidate& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  const int ma = std::abs(a.mv.dx) + std::abs(a.mv.dy);
  const int mb = std::abs(b.mv.dx) + std::abs(b.mv.dy);
  if (ma != mb) return ma < mb;
  if (a.mv.dy != b.mv.dy) return a.mv.dy < b.mv.dy;
  return a.mv.dx < b.mv.dx;
}

class BlockMatcher {
 public:
  BlockMatcher(const Frame& anchor, const Frame& target, int bx, int by, const BlockGrid& grid,
               int range)
      : anchor_(anchor),
        target_(target),
        bx_(bx),
        by_(by),
        bw_(grid.block_w),
        bh_(grid.block_h),
        range_(range),
        cache_(static_cast<size_t>(2 * range + 1) * (2 * range + 1),
               std::numeric_limits<double>::quiet_NaN()) {}

  bool valid(MotionVector v) const {
    if (std::abs(v.dx) > range_ || std::abs(v.dy) > range_) return false;
    const int x = bx_ + v.dx;
    const int y = by_ + v.dy;
    return x >= 0 && y >= 0 && x + bw_ <= anchor_.width && y + bh_ <= anchor_.height;
  }

  double ssd(MotionVector v) {
    double& slot = cache_[static_cast<size_t>(v.dy + range_) * (2 * range_ + 1) + (v.dx + range_)];
    if (!std::isnan(slot)) return slot;
    double sum = 0.0;
    for (int y = 0; y < bh_; ++y) {
      const double* t = &target_.samples[static_cast<size_t>(by_ + y) * target_.width + bx_];
      const double* a =
          &anchor_.samples[static_cast<size_t>(by_ + v.dy + y) * anchor_.width + bx_ + v.dx];
      for (int x = 0; x < bw_; ++x) {
        const double d = t[x] - a[x];
        sum += d * d;
      }
    }
    slot = sum;
    return sum;
  }

  Candidate consider(Candidate best, MotionVector v) {
    if (!valid(v)) return best;
    Candidate c{v, ssd(v)};
    return better(c, best) ? c : best;
  }

 private:
  const Frame& anchor_;
  const Frame& target_;
  int bx_, by_, bw_, bh_, range_;
  std::vector<double> cache_;
};

constexpr std::array<MotionVector, 8> kLargeDiamond = {
    MotionVector{2, 0},  MotionVector{-2, 0}, MotionVector{0, 2},  MotionVector{0, -2},
    MotionVector{1, 1},  MotionVector{1, -1}, MotionVector{-1, 1}, MotionVector{-1, -1}};

constexpr std::array<MotionVector, 4> kSmallDiamond = {
    MotionVector{1, 0}, MotionVector{-1, 0}, MotionVector{0, 1}, MotionVector{0, -1}};

}  // namespace

SearchResult diamond_search(const Frame& anchor, const Frame& target, int block_x, int block_y,
                            const BlockGrid& grid, int search_range) {
  if (!anchor.same_size(target)) fail(errc::shape_mismatch, "diamond_search: frame sizes differ");
  if (search_range < 0) fail(errc::bad_config, "search range must be >= 0");
  if (block_x < 0 || block_y < 0 || block_x + grid.block_w > target.width ||
      block_y + grid.block_h > target.height)
    fail(errc::shape_mismatch, "diamond_search: block outside frame");

  BlockMatcher m(anchor, target, block_x, block_y, grid, search_range);
  Candidate center{MotionVector{0, 0}, m.ssd({0, 0})};

  // Large diamond: walk while some neighbour beats the center. Each move
  // strictly improves the (cost, tie-break) key, so the walk terminates.
  for (;;) {
    Candidate best = center;
    for (MotionVector off : kLargeDiamond)
      best = m.consider(best, {center.mv.dx + off.dx, center.mv.dy + off.dy});
    if (best.mv == center.mv) break;
    center = best;
  }
  // Small diamond refinement.
  Candidate best = center;
  for (MotionVector off : kSmallDiamond)
    best = m.consider(best, {center.mv.dx + off.dx, center.mv.dy + off.dy});
  return SearchResult{best.mv, best.cost};
}

MotionField estimate_motion(const Frame& anchor, const Frame& target, const ActivityMap& map,
                            int search_range, int mv_bits) {
  MotionField field;
  field.grid = map.grid;
  field.search_range = search_range;
  field.b_m = mv_bits > 0 ? mv_bits : default_mv_bits(search_range);
  field.vectors.assign(static_cast<size_t>(map.grid.block_count()), std::nullopt);
  for (int by = 0; by < map.grid.rows; ++by) {
    for (int bx = 0; bx < map.grid.cols; ++bx) {
      if (!map.block_active(bx, by)) continue;
      const SearchResult r = diamond_search(anchor, target, bx * map.grid.block_w,
                                            by * map.grid.block_h, map.grid, search_range);
      field.vectors[static_cast<size_t>(by) * map.grid.cols + bx] = r.mv;
    }
  }
  return field;
}

Frame motion_compensate(const Frame& anchor, const MotionField& field) {
  const BlockGrid& grid = field.grid;
  if (anchor.width < grid.usable_width() || anchor.height < grid.usable_height())
    fail(errc::shape_mismatch, "motion_compensate: frame smaller than grid coverage");
  if (field.vectors.size() != static_cast<size_t>(grid.block_count()))
    fail(errc::shape_mismatch, "motion_compensate: vector count does not match grid");

  Frame out = anchor;
  for (int by = 0; by < grid.rows; ++by) {
    for (int bx = 0; bx < grid.cols; ++bx) {
      const auto& v = field.vectors[static_cast<size_t>(by) * grid.cols + bx];
      if (!v) continue;  // zero displacement: anchor copy already in place
      const int ox = bx * grid.block_w;
      const int oy = by * grid.block_h;
      const int sx = ox + v->dx;
      const int sy = oy + v->dy;
      if (sx < 0 || sy < 0 || sx + grid.block_w > anchor.width ||
          sy + grid.block_h > anchor.height)
        fail(errc::internal, "motion_compensate: vector reads outside the anchor frame");
      for (int y = 0; y < grid.block_h; ++y)
        for (int x = 0; x < grid.block_w; ++x) out.at(ox + x, oy + y) = anchor.at(sx + x, sy + y);
    }
  }
  return out;
}

ResidualSet extract_residuals(const Frame& anchor, const Frame& target, const ActivityMap& map,
                              const MotionField& field) {
  if (!anchor.same_size(target))
    fail(errc::shape_mismatch, "extract_residuals: frame sizes differ");
  if (!(map.grid == field.grid))
    fail(errc::shape_mismatch, "extract_residuals: activity map and motion field grids differ");
  if (anchor.width < map.grid.usable_width() || anchor.height < map.grid.usable_height())
    fail(errc::shape_mismatch, "extract_residuals: frame smaller than grid coverage");

  const BlockGrid& grid = map.grid;
  const Frame compensated = motion_compensate(anchor, field);

  ResidualSet res;
  for (int by = 0; by < grid.rows; ++by) {
    for (int bx = 0; bx < grid.cols; ++bx) {
      const bool active = map.block_active(bx, by);
      auto& stream = active ? res.dfd_samples : res.fd_samples;
      const Frame& prediction = active ? compensated : anchor;
      for (int y = by * grid.block_h; y < (by + 1) * grid.block_h; ++y)
        for (int x = bx * grid.block_w; x < (bx + 1) * grid.block_w; ++x)
          stream.push_back(target.at(x, y) - prediction.at(x, y));
    }
  }
  return res;
}

}  // namespace mcrd
