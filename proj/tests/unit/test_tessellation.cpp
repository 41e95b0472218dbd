#include <doctest.h>

#include <cmath>
#include <numbers>

#include "core/tessellation.hpp"

using namespace topoiga;

namespace {

ImplicitGeometry circle(double r, Vec3 c = {0.5, 0.5, 0.0}) {
  ImplicitGeometry g;
  g.nd = 2;
  g.box = {{0, 0, 0}, {1, 1, 0}};
  g.f = [=](const Vec3& x) { return 0.5 + r - std::hypot(x[0] - c[0], x[1] - c[1]); };
  return g;
}

ImplicitGeometry half_plane(double a) {
  ImplicitGeometry g;
  g.nd = 2;
  g.box = {{0, 0, 0}, {1, 1, 0}};
  g.f = [=](const Vec3& x) { return 0.5 + a - x[0] - 0.5 * x[1]; };
  return g;
}

}  // namespace

TEST_CASE("quadrature schedule decays to the centroid rule") {
  const QuadratureSchedule s{3, 3, 1.0};
  CHECK(s.order(1) == 3);
  CHECK(s.order(2) == 2);
  CHECK(s.order(3) == 0);
  const QuadratureSchedule half{3, 3, 0.5};
  CHECK(half.order(1) == 2);
}

TEST_CASE("simplex rules integrate polynomials of their order exactly") {
  const Vec3 tri[3] = {{0, 0, 0}, {2, 0, 0}, {0, 1, 0}};
  std::vector<QuadPoint> q;
  simplex_rule(2, tri, 3, q);
  double s = 0.0;
  for (const auto& p : q) s += p.w * p.x[0] * p.x[0] * p.x[1];
  // int_T x^2 y over (0,0),(2,0),(0,1) = 2/15
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-13));

  const Vec3 tet[4] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  q.clear();
  simplex_rule(3, tet, 2, q);
  s = 0.0;
  for (const auto& p : q) s += p.w * p.x[0] * p.x[2];
  CHECK(s == doctest::Approx(1.0 / 120.0).epsilon(1e-13));

  q.clear();
  simplex_rule(2, tri, 0, q);
  REQUIRE(q.size() == 1);
  CHECK(q[0].w == doctest::Approx(1.0));
}

TEST_CASE("classification of cells") {
  const ImplicitGeometry g = circle(0.3);
  const CellClassification c = classify_cells(g, {2, g.box, {8, 8, 1}});
  CHECK(c.inside.size() + c.outside.size() + c.cut.size() == 64);
  CHECK(classify_box(g, {{0.45, 0.45, 0}, {0.55, 0.55, 0}}) == CellState::inside);
  CHECK(classify_box(g, {{0.0, 0.0, 0}, {0.1, 0.1, 0}}) == CellState::outside);
  CHECK(classify_box(g, {{0.7, 0.45, 0}, {0.9, 0.55, 0}}) == CellState::cut);
}

TEST_CASE("straight boundary is captured exactly") {
  const ImplicitGeometry g = half_plane(0.513);
  const TessellatedDomain d = tessellate(g, {2, g.box, {7, 7, 1}});
  // x + y/2 < 0.513 over the unit square: area 0.513 - 0.25
  CHECK(d.volume() == doctest::Approx(0.263).epsilon(1e-12));
  CHECK(d.immersed_boundary_measure() == doctest::Approx(std::hypot(1.0, 0.5)).epsilon(1e-12));
  CHECK(d.exterior_boundary_measure(2) == doctest::Approx(0.513).epsilon(1e-12));
  CHECK(d.exterior_boundary_measure(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("divergence identity on a clipped circle with exterior facets") {
  const ImplicitGeometry g = circle(0.4, {0.2, 0.6, 0.0});
  const TessellatedDomain d = tessellate(g, {2, g.box, {12, 12, 1}});
  // Full order on every sub-cell; the default schedule ends with the centroid rule.
  const DomainQuadrature q = build_quadrature(d, {3, 100, 1.0});
  const double vol = q.integrate([](const Vec3& x) { return 2.0 * x[0] + 3.0 * x[1] * x[1]; });
  const double sur = q.integrate_boundary(
      [](const Vec3& x, const Vec3& n) { return x[0] * x[0] * n[0] + x[1] * x[1] * x[1] * n[1]; }, true);
  CHECK(vol == doctest::Approx(sur).epsilon(1e-10));
}

TEST_CASE("circle area converges with the bisection depth") {
  const ImplicitGeometry g = circle(0.3);
  double prev = 1.0;
  for (int rho : {1, 2, 3}) {
    const TessellatedDomain d = tessellate(g, {2, g.box, {16, 16, 1}}, {rho});
    const double err = std::abs(d.volume() / (std::numbers::pi * 0.09) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("boundary lying on cell faces produces facets") {
  ImplicitGeometry g;
  g.nd = 2;
  g.box = {{0, 0, 0}, {1, 1, 0}};
  g.f = [](const Vec3& x) { return x[0] < 0.5 ? 1.0 : 0.5 - (x[0] - 0.5); };  // phi = 0 for x >= 0.5 edge
  const TessellatedDomain d = tessellate(g, {2, g.box, {4, 4, 1}});
  CHECK(d.volume() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.immersed_boundary_measure() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("3D sphere volume and surface") {
  ImplicitGeometry g;
  g.nd = 3;
  g.box = {{0, 0, 0}, {1, 1, 1}};
  g.f = [](const Vec3& x) { return 0.5 + 0.35 - norm(x - Vec3{0.5, 0.5, 0.5}); };
  const TessellatedDomain d = tessellate(g, {3, g.box, {6, 6, 6}}, {2});
  const double r = 0.35;
  CHECK(d.volume() == doctest::Approx(4.0 / 3.0 * std::numbers::pi * r * r * r).epsilon(0.01));
  CHECK(d.immersed_boundary_measure() == doctest::Approx(4.0 * std::numbers::pi * r * r).epsilon(0.02));
  const DomainQuadrature q = build_quadrature(d, {});
  const double vol = q.integrate([](const Vec3& x) { return 1.0 + x[2]; });
  const double sur = q.integrate_boundary([](const Vec3& x, const Vec3& n) { return x[0] * n[0] + 0.5 * x[2] * x[2] * n[2]; }, true);
  CHECK(vol == doctest::Approx(sur).epsilon(1e-10));
}
