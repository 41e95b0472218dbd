#include <doctest.h>

#include <random>
#include <sstream>

#include "core/thb_basis.hpp"
#include "fixtures.hpp"

using namespace topoiga;

namespace {

HierarchicalMesh three_level_mesh(const VoxelGrid& grid) {
  HierarchicalMesh mesh = base_mesh(grid);
  mesh = mesh.refine({LevelCell{0, {2, 2, 0}}}, 2);
  std::vector<LevelCell> marks;
  for (const LevelCell& c : mesh.active_cells())
    if (c.level == 1 && c.cell[0] == 5 && c.cell[1] == 5) marks.push_back(c);
  return mesh.refine(marks, 2);
}

VoxelGrid random_grid(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * n);
  for (double& x : v) x = u(rng);
  return fixtures::square_image(n, v);
}

}  // namespace

TEST_CASE("refinement keeps regions nested and covers the marked supports") {
  const VoxelGrid grid = random_grid(8, 1);
  const HierarchicalMesh mesh = three_level_mesh(grid);
  CHECK(mesh.max_level() == 2);
  CHECK(mesh.is_nested());
  CHECK_FALSE(mesh.active(LevelCell{0, {2, 2, 0}}));
  // Active cells tile the box.
  double area = 0.0;
  for (const LevelCell& c : mesh.active_cells()) {
    const Box b = mesh.cell_box(c);
    area += b.length(0) * b.length(1);
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mesh serialization round trip") {
  const HierarchicalMesh mesh = three_level_mesh(random_grid(8, 2));
  std::stringstream ss;
  mesh.write(ss);
  CHECK(HierarchicalMesh::read(ss) == mesh);
}

TEST_CASE("THB basis forms a partition of unity with non-negative functions") {
  const HierarchicalMesh mesh = three_level_mesh(random_grid(8, 3));
  for (int p : {1, 2, 3}) {
    const THBBasis basis(mesh, p);
    std::mt19937 rng(p);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    std::vector<Vec3> grad;
    for (int k = 0; k < 300; ++k) {
      basis.evaluate({u(rng), u(rng), 0.0}, idx, val, &grad);
      double s = 0.0, gx = 0.0, gy = 0.0;
      for (std::size_t i = 0; i < val.size(); ++i) {
        CHECK(val[i] >= -1e-14);
        s += val[i];
        gx += grad[i][0];
        gy += grad[i][1];
      }
      REQUIRE(s == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(gx) < 1e-10);
      CHECK(std::abs(gy) < 1e-10);
    }
  }
}

TEST_CASE("conservative convolution reproduces a constant image") {
  const HierarchicalMesh mesh = three_level_mesh(random_grid(8, 4));
  const THBBasis basis(mesh, 2);
  // The conservative level set of a constant image is that constant everywhere.
  const VoxelGrid flat(2, {8, 8, 1}, {0.125, 0.125, 1}, {0, 0, 0}, std::vector<double>(64, 0.4));
  const ConvolutionCoefficients c = convolve_thb(flat, basis);
  CHECK(c.a.size() == basis.size());
  for (double a : c.a) CHECK(a == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("truncated level set conserves the image integral") {
  const VoxelGrid grid = random_grid(8, 5);
  const LevelSetField f = smooth_level_set(grid, three_level_mesh(grid), 2);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < f.coefficients().a.size(); ++i) lhs += f.coefficients().a[i] * f.coefficients().volumes[i];
  for (double v : grid.values()) rhs += v / 64.0;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("level set gradient matches finite differences") {
  const VoxelGrid grid = random_grid(8, 6);
  const LevelSetField f = smooth_level_set(grid, three_level_mesh(grid), 3);
  const Vec3 x{0.33, 0.41, 0.0};
  const double e = 1e-6;
  const Vec3 g = f.gradient(x);
  CHECK(g[0] == doctest::Approx((f({x[0] + e, x[1], 0}) - f({x[0] - e, x[1], 0})) / (2 * e)).epsilon(1e-5));
  CHECK(g[1] == doctest::Approx((f({x[0], x[1] + e, 0}) - f({x[0], x[1] - e, 0})) / (2 * e)).epsilon(1e-5));
}

TEST_CASE("3D THB partition of unity") {
  const VoxelGrid grid(3, {4, 4, 4}, {0.25, 0.25, 0.25}, {0, 0, 0}, std::vector<double>(64, 1.0));
  HierarchicalMesh mesh = base_mesh(grid).refine({LevelCell{0, {1, 1, 1}}}, 2);
  const THBBasis basis(mesh, 2);
  std::vector<std::size_t> idx;
  std::vector<double> val;
  for (const Vec3& x : {Vec3{0.3, 0.3, 0.3}, Vec3{0.9, 0.1, 0.5}, Vec3{0.5, 0.5, 0.5}}) {
    basis.evaluate(x, idx, val);
    double s = 0.0;
    for (double v : val) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  }
}
