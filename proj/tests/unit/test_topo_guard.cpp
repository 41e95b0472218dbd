#include <doctest.h>

#include "core/topo_guard.hpp"
#include "fixtures.hpp"

using namespace topoiga;

namespace {

BinaryImage rows_image(const std::vector<std::string>& rows, int subdivision = 1) {
  const int ny = static_cast<int>(rows.size()), nx = static_cast<int>(rows[0].size());
  BinaryImage img(2, {nx, ny, 1}, subdivision);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) img.set(Index3{x, y, 0}, rows[y][x] == '1');
  return img;
}

}  // namespace

TEST_CASE("windows are clipped to the image") {
  const Window w = make_window({0, 4, 0}, 1, {5, 5, 1}, 2);
  CHECK(w.lo == Index3{0, 3, 0});
  CHECK(w.hi == Index3{2, 5, 1});
}

TEST_CASE("comparison is reflexive and detects a broken bridge") {
  const BinaryImage v = rows_image({"111", "010", "111"});
  CHECK(compare_window(v, v).verdict);
  const BinaryImage s = rows_image({"111", "000", "111"});
  const ComparisonReport r = compare_window(v, s);
  CHECK_FALSE(r.verdict);
  CHECK(r.chi_v == std::map<int, int>{{1, 1}});
  CHECK(r.chi_s == std::map<int, int>{{1, 2}});
}

TEST_CASE("comparison detects a closed hole through the complement") {
  const BinaryImage v = rows_image({"00000", "01110", "01010", "01110", "00000"});
  const BinaryImage s = rows_image({"00000", "01110", "01110", "01110", "00000"});
  CHECK_FALSE(compare_window(v, s).verdict);
}

TEST_CASE("mask only takes difference regions inside the outer ring") {
  const BinaryImage v = rows_image({"000000", "000000", "001100", "001100", "000000", "000000"}, 2);
  BinaryImage s = v;
  s.set(Index3{5, 5, 0}, true);   // corner speck: in the ring
  s.set(Index3{2, 2, 0}, false);  // interior change
  int regions = 0;
  const BinaryImage m = boundary_mask(v, s, Connectivity::vertex, &regions);
  CHECK(regions == 1);
  CHECK(m(Index3{5, 5, 0}));
  CHECK_FALSE(m(Index3{2, 2, 0}));
  const BinaryImage f = apply_mask(v, s, m);
  CHECK_FALSE(f(Index3{5, 5, 0}));
  CHECK_FALSE(f(Index3{2, 2, 0}));
  CHECK(f(Index3{3, 3, 0}));
}

TEST_CASE("masked comparison forgives spill-over at the window border") {
  const BinaryImage v = upsample(rows_image({"010", "010", "010"}), 3);
  BinaryImage s = v;
  s.set(Index3{8, 8, 0}, true);
  CHECK_FALSE(compare_window(v, s).verdict);
  CHECK(compare_masked(v, s).verdict);
}

TEST_CASE("faithful image is not flagged") {
  const VoxelGrid grid = fixtures::disk();
  const TopologyResult r = preserve_topology(grid, {});
  CHECK(r.refinements == 0);
  CHECK(r.converged);
  REQUIRE(r.indicators.size() == 1);
  CHECK(r.indicators[0].count() == 0);
}

TEST_CASE("thin features are flagged, refined once and repaired") {
  const VoxelGrid grid = fixtures::bridge_and_channel();
  TopologyParams params;
  params.max_passes = 3;
  const TopologyResult r = preserve_topology(grid, params);
  CHECK(r.refinements == 1);
  CHECK(r.converged);
  REQUIRE(r.indicators.size() == 2);
  const BinaryImage& flags = r.indicators[0];
  CHECK(label_components(flags, Connectivity::vertex).region_count >= 2);
  CHECK(flags(Index3{7, 18, 0}));   // bridge
  CHECK(flags(Index3{29, 16, 0}));  // channel
  CHECK(r.indicators[1].count() == 0);
  CHECK(r.mesh.max_level() == 1);
}

TEST_CASE("marking takes each active cell once") {
  const VoxelGrid grid = fixtures::disk(8);
  const HierarchicalMesh mesh = base_mesh(grid);
  BinaryImage ind(2, {8, 8, 1});
  ind.set(Index3{3, 3, 0}, true);
  ind.set(Index3{4, 3, 0}, true);
  const auto marks = mark_refinement(ind, mesh);
  CHECK(marks.size() == 2);
  CHECK_THROWS_AS(mark_refinement(BinaryImage(2, {4, 4, 1}), mesh), DimensionError);
}

TEST_CASE("ring-shaped indicators are reported") {
  CHECK(ring_indicator_count(rows_image({"111", "101", "111"})) == 1);
  CHECK(ring_indicator_count(rows_image({"111", "111", "111"})) == 0);
}
