#include <doctest.h>

#include <random>

#include "core/voxel_image.hpp"

using namespace topoiga;

namespace {

BinaryImage from_rows(const std::vector<std::string>& rows) {
  const int ny = static_cast<int>(rows.size()), nx = static_cast<int>(rows[0].size());
  BinaryImage img(2, {nx, ny, 1});
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) img.set(Index3{x, y, 0}, rows[y][x] == '1');
  return img;
}

}  // namespace

TEST_CASE("threshold keeps values strictly above g_crit") {
  const VoxelGrid g(2, {2, 2, 1}, {1, 1, 1}, {0, 0, 0}, {0.0, 0.5, 0.51, 1.0});
  const BinaryImage b = threshold(g, 0.5);
  CHECK(b.count() == 2);
  CHECK_FALSE(b[1]);
  CHECK(b[2]);
}

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(VoxelGrid(2, {2, 2, 1}, {1, 1, 1}, {0, 0, 0}, {0.0, 0.5, 1.0}), DimensionError);
  CHECK_THROWS_AS(VoxelGrid(2, {2, 2, 1}, {1, 0, 1}, {0, 0, 0}, {0.0, 0.5, 1.0, 1.0}), DimensionError);
}

TEST_CASE("diagonal pixels connect under vertex but not face connectivity") {
  const BinaryImage img = from_rows({"10", "01"});
  CHECK(label_components(img, Connectivity::vertex).region_count == 1);
  CHECK(label_components(img, Connectivity::face).region_count == 2);
}

TEST_CASE("ring has Euler characteristic 0; its complement is the hole and an enclosing frame") {
  const BinaryImage ring = from_rows({"00000", "01110", "01010", "01110", "00000"});
  const EulerSummary e = euler_characteristic(ring, Connectivity::vertex);
  CHECK(e.total_chi == 0);
  CHECK(e.chi_multiset == std::map<int, int>{{0, 1}});
  const EulerSummary c = euler_characteristic(complement(ring), Connectivity::vertex);
  CHECK(c.chi_multiset == std::map<int, int>{{0, 1}, {1, 1}});
}

TEST_CASE("hole-count and cubical Euler characteristics agree on random 2D images") {
  std::mt19937 rng(3);
  std::bernoulli_distribution coin(0.45);
  for (int t = 0; t < 200; ++t) {
    BinaryImage img(2, {7, 6, 1});
    for (std::size_t k = 0; k < img.size(); ++k) img.set(k, coin(rng));
    for (Connectivity c : {Connectivity::vertex, Connectivity::face}) {
      const EulerSummary a = euler_characteristic(img, c), b = cubical_euler_characteristic(img, c);
      REQUIRE(a.per_region_chi == b.per_region_chi);
    }
  }
}

TEST_CASE("3D: solid cube has chi 1, hollow cube chi 2") {
  BinaryImage solid(3, {3, 3, 3}, 1, true);
  CHECK(euler_characteristic(solid, Connectivity::vertex).total_chi == 1);
  BinaryImage hollow = solid;
  hollow.set(Index3{1, 1, 1}, false);
  CHECK(euler_characteristic(hollow, Connectivity::face).total_chi == 2);
}

TEST_CASE("set algebra") {
  const BinaryImage a = from_rows({"110", "000"}), b = from_rows({"011", "001"});
  CHECK(unite(a, b).count() == 4);
  CHECK(intersect(a, b).count() == 1);
  CHECK(symmetric_difference(a, b).count() == 3);
  CHECK(complement(complement(a)) == a);
  CHECK_THROWS_AS(unite(a, from_rows({"1"})), DimensionError);
}

TEST_CASE("upsample replicates cells and records the subdivision") {
  const BinaryImage a = from_rows({"10", "01"});
  const BinaryImage u = upsample(a, 3);
  CHECK(u.dims() == Index3{6, 6, 1});
  CHECK(u.subdivision() == 3);
  CHECK(u.count() == 18);
  CHECK(u(Index3{2, 2, 0}));
  CHECK_FALSE(u(Index3{3, 2, 0}));
}

TEST_CASE("crop") {
  const BinaryImage a = from_rows({"100", "010", "001"});
  const BinaryImage c = a.crop({1, 1, 0}, {3, 3, 1});
  CHECK(c.dims() == Index3{2, 2, 1});
  CHECK(c.count() == 2);
}
