#include <doctest.h>

#include <random>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/motion.hpp"
#include "oracles.hpp"

using namespace mcrd;

namespace {

Frame random_frame(int w, int h, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  Frame f(w, h);
  for (double& s : f.samples) s = dist(gen);
  return f;
}

ActivityMap uniform_map(const BlockGrid& grid, int frame_w, int frame_h, bool active) {
  ActivityMap map;
  map.grid = grid;
  map.frame_width = frame_w;
  map.frame_height = frame_h;
  map.labels.assign(static_cast<size_t>(grid.block_count()), active ? 1 : 0);
  map.pixel_mask.assign(static_cast<size_t>(frame_w) * frame_h, active ? 1 : 0);
  map.lambda_m = active ? 1.0 : 0.0;
  return map;
}

MotionField empty_field(const BlockGrid& grid, int range = 15) {
  MotionField field;
  field.grid = grid;
  field.search_range = range;
  field.b_m = default_mv_bits(range);
  field.vectors.assign(static_cast<size_t>(grid.block_count()), std::nullopt);
  return field;
}

}  // namespace

TEST_CASE("default_mv_bits is a fixed-length code for the search span") {
  CHECK(default_mv_bits(7) == 8);    // span 15 -> 4 bits per component
  CHECK(default_mv_bits(15) == 10);  // span 31 -> 5 bits per component
  CHECK(default_mv_bits(0) == 0);
  CHECK(default_mv_bits(1) == 4);
}

TEST_CASE("diamond search on identical frames returns the zero vector") {
  const Frame f = oracles::smooth_field(64, 64);
  const BlockGrid grid = BlockGrid::for_frame(64, 64, 16, 16);
  const SearchResult r = diamond_search(f, f, 16, 16, grid, 7);
  CHECK(r.mv == MotionVector{0, 0});
  CHECK(r.cost == 0.0);
}

TEST_CASE("diamond search recovers a global shift exactly") {
  const Frame anchor = oracles::smooth_field(64, 64);
  const Frame target = oracles::shift_frame(anchor, 3, 2);
  const BlockGrid grid = BlockGrid::for_frame(64, 64, 16, 16);
  const SearchResult r = diamond_search(anchor, target, 16, 16, grid, 7);
  CHECK(r.mv == MotionVector{3, 2});
  CHECK(r.cost == 0.0);
  const SearchResult full = oracles::full_search(anchor, target, 16, 16, grid, 7);
  CHECK(full.mv == MotionVector{3, 2});
  CHECK(full.cost == 0.0);
}

TEST_CASE("diamond cost is bounded by the zero vector and from below by full search") {
  for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Frame anchor = random_frame(64, 64, seed);
    const Frame target = random_frame(64, 64, seed + 100);
    const BlockGrid grid = BlockGrid::for_frame(64, 64, 16, 16);
    for (int by = 0; by < grid.rows; ++by)
      for (int bx = 0; bx < grid.cols; ++bx) {
        const int ox = bx * 16, oy = by * 16;
        const SearchResult diamond = diamond_search(anchor, target, ox, oy, grid, 7);
        const SearchResult full = oracles::full_search(anchor, target, ox, oy, grid, 7);
        const double zero_cost = oracles::block_ssd(anchor, target, ox, oy, 16, 16, 0, 0);
        CHECK(diamond.cost >= full.cost);
        CHECK(diamond.cost <= zero_cost);
        CHECK(full.cost <= zero_cost);
        CHECK(std::abs(diamond.mv.dx) <= 7);
        CHECK(std::abs(diamond.mv.dy) <= 7);
      }
  }
}

TEST_CASE("ties break toward the smallest displacement") {
  const Frame flat(32, 32, 9.0);
  const BlockGrid grid = BlockGrid::for_frame(32, 32, 16, 16);
  const SearchResult r = diamond_search(flat, flat, 8, 8, grid, 7);
  CHECK(r.mv == MotionVector{0, 0});  // every candidate costs 0
  CHECK(r.cost == 0.0);
}

TEST_CASE("search clips candidates at the frame boundary") {
  const Frame anchor = oracles::smooth_field(32, 32);
  const Frame target = oracles::shift_frame(anchor, 5, 5);
  const BlockGrid grid = BlockGrid::for_frame(32, 32, 16, 16);
  // Corner block: negative displacements would leave the anchor; range
  // exceeds the remaining margin on the other side.
  const SearchResult r = diamond_search(anchor, target, 0, 0, grid, 15);
  CHECK(r.cost <= oracles::block_ssd(anchor, target, 0, 0, 16, 16, 0, 0));
  CHECK(0 + r.mv.dx >= 0);
  CHECK(0 + r.mv.dy >= 0);
}

TEST_CASE("diamond search rejects blocks outside the frame") {
  const Frame f(32, 32, 0.0);
  const BlockGrid grid = BlockGrid::for_frame(32, 32, 16, 16);
  CHECK_THROWS_AS(diamond_search(f, f, 20, 20, grid, 7), error);
}

TEST_CASE("motion compensation with an empty field is the identity") {
  const Frame anchor = random_frame(48, 48, 9);
  const BlockGrid grid = BlockGrid::for_frame(48, 48, 16, 16);
  const Frame out = motion_compensate(anchor, empty_field(grid));
  CHECK(out.samples == anchor.samples);
}

TEST_CASE("a single vector displaces exactly one block") {
  const Frame anchor = random_frame(64, 64, 21);
  const BlockGrid grid = BlockGrid::for_frame(64, 64, 16, 16);
  MotionField field = empty_field(grid);
  field.vectors[static_cast<size_t>(1) * grid.cols + 1] = MotionVector{3, 2};  // block (1,1)
  const Frame out = motion_compensate(anchor, field);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      const bool inside = x >= 16 && x < 32 && y >= 16 && y < 32;
      if (inside)
        CHECK(out.at(x, y) == anchor.at(x + 3, y + 2));
      else
        CHECK(out.at(x, y) == anchor.at(x, y));
    }
}

TEST_CASE("compensation matches the target for a uniformly shifted frame") {
  const Frame anchor = oracles::smooth_field(64, 64);
  const Frame target = oracles::shift_frame(anchor, 3, 2);
  const BlockGrid grid = BlockGrid::for_frame(64, 64, 16, 16);
  const ActivityMap map = uniform_map(grid, 64, 64, true);
  const MotionField field = estimate_motion(anchor, target, map, 7);
  const Frame out = motion_compensate(anchor, field);
  // Interior blocks reproduce the target exactly; edge blocks may differ
  // where the shift fell off the frame.
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) CHECK(out.at(16 + x, 16 + y) == target.at(16 + x, 16 + y));
}

TEST_CASE("an out-of-bounds vector is an internal invariant violation") {
  const Frame anchor(32, 32, 0.0);
  const BlockGrid grid = BlockGrid::for_frame(32, 32, 16, 16);
  MotionField field = empty_field(grid);
  field.vectors[0] = MotionVector{-5, 0};
  try {
    motion_compensate(anchor, field);
    FAIL("expected internal error");
  } catch (const error& e) {
    CHECK(e.code() == errc::internal);
  }
}

TEST_CASE("residual extraction splits streams by block class") {
  const BlockGrid grid = BlockGrid::for_frame(32, 16, 16, 16);

  SUBCASE("identical frames, all inactive") {
    const Frame f = random_frame(32, 16, 31);
    const ActivityMap map = uniform_map(grid, 32, 16, false);
    const ResidualSet res = extract_residuals(f, f, map, empty_field(grid));
    CHECK(res.dfd_samples.empty());
    REQUIRE(res.fd_samples.size() == 512);
    for (double s : res.fd_samples) CHECK(s == 0.0);
  }

  SUBCASE("counts follow the activity split") {
    const Frame a = random_frame(32, 16, 32), b = random_frame(32, 16, 33);
    ActivityMap map = uniform_map(grid, 32, 16, false);
    map.labels[1] = 1;  // one of two blocks active
    map.lambda_m = 0.5;
    const ResidualSet res = extract_residuals(a, b, map, empty_field(grid));
    CHECK(res.dfd_samples.size() == 256);  // 1 active block x 256
    CHECK(res.fd_samples.size() == 256);
  }

  SUBCASE("perfect compensation zeroes the active residuals") {
    const Frame anchor = oracles::smooth_field(32, 16);
    const Frame target = oracles::shift_frame(anchor, 2, 0);
    ActivityMap map = uniform_map(grid, 32, 16, false);
    map.labels[0] = 1;  // block (0,0): its source window stays inside
    MotionField field = empty_field(grid, 7);
    field.vectors[0] = MotionVector{2, 0};
    const ResidualSet res = extract_residuals(anchor, target, map, field);
    for (double s : res.dfd_samples) CHECK(s == 0.0);
  }

  SUBCASE("signed values match the per-pixel oracle on both branches") {
    const Frame a = random_frame(16, 16, 40), b = random_frame(16, 16, 41);
    const BlockGrid small = BlockGrid::for_frame(16, 16, 8, 8);
    ActivityMap map = uniform_map(small, 16, 16, false);
    map.labels[3] = 1;  // block (1,1) active
    MotionField field = empty_field(small, 3);
    field.vectors[3] = MotionVector{-1, -2};
    const ResidualSet res = extract_residuals(a, b, map, field);

    // frame-difference branch: blocks (0,0), (1,0), (0,1) in order
    size_t k = 0;
    for (int block : {0, 1, 2}) {
      const int ox = (block % 2) * 8, oy = (block / 2) * 8;
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
          CHECK(res.fd_samples[k++] == b.at(ox + x, oy + y) - a.at(ox + x, oy + y));
    }
    // compensated branch
    k = 0;
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x)
        CHECK(res.dfd_samples[k++] == b.at(8 + x, 8 + y) - a.at(8 + x - 1, 8 + y - 2));
  }

  SUBCASE("grid mismatch throws") {
    const Frame a = random_frame(32, 16, 50), b = random_frame(32, 16, 51);
    const ActivityMap map = uniform_map(grid, 32, 16, false);
    const BlockGrid other = BlockGrid::for_frame(32, 16, 8, 8);
    CHECK_THROWS_AS(extract_residuals(a, b, map, empty_field(other)), error);
  }
}

TEST_CASE("all-inactive extraction reduces to the signed frame difference") {
  const Frame a = random_frame(48, 32, 60), b = random_frame(48, 32, 61);
  const BlockGrid grid = BlockGrid::for_frame(48, 32, 16, 16);
  const ActivityMap map = uniform_map(grid, 48, 32, false);
  const ResidualSet res = extract_residuals(a, b, map, empty_field(grid));
  size_t k = 0;
  for (int by = 0; by < grid.rows; ++by)
    for (int bx = 0; bx < grid.cols; ++bx)
      for (int y = by * 16; y < by * 16 + 16; ++y)
        for (int x = bx * 16; x < bx * 16 + 16; ++x)
          CHECK(res.fd_samples[k++] == b.at(x, y) - a.at(x, y));
  CHECK(k == res.fd_samples.size());
}

TEST_CASE("estimate_motion assigns vectors exactly to active blocks") {
  const Frame anchor = oracles::smooth_field(64, 64);
  const Frame target = oracles::shift_frame(anchor, 1, 1);
  const BlockGrid grid = BlockGrid::for_frame(64, 64, 16, 16);
  ActivityMap map = uniform_map(grid, 64, 64, false);
  map.labels[5] = 1;
  map.labels[10] = 1;
  const MotionField field = estimate_motion(anchor, target, map, 7);
  for (size_t i = 0; i < field.vectors.size(); ++i)
    CHECK(field.vectors[i].has_value() == (map.labels[i] != 0));
  CHECK(field.b_m == 8);
}

TEST_CASE("motion field JSON export") {
  const BlockGrid grid = BlockGrid::for_frame(32, 16, 16, 16);
  MotionField field = empty_field(grid, 7);
  field.vectors[1] = MotionVector{3, -2};
  const auto doc = nlohmann::json::parse(field.to_json());
  CHECK(doc.at("search_range") == 7);
  CHECK(doc.at("vectors").at(0).at(0).is_null());
  CHECK(doc.at("vectors").at(0).at(1).at(0) == 3);
  CHECK(doc.at("vectors").at(0).at(1).at(1) == -2);
}
