#pragma once

#include <functional>
#include <vector>

#include "core/quadrature.hpp"
#include "core/thb_basis.hpp"

namespace topoiga {

/// Scalar field over the ambient box: f(x) and the threshold g_crit.
struct ImplicitGeometry {
  int nd = 2;
  Box box;
  std::function<double(const Vec3&)> f;
  double g_crit = 0.5;

  double phi(const Vec3& x) const { return f(x) - g_crit; }
  static ImplicitGeometry from_field(const LevelSetField& field, double g_crit);
};

/// Uniform background (analysis) mesh over the ambient box.
struct BackgroundMesh {
  int nd = 2;
  Box box;
  Index3 cells{1, 1, 1};

  Vec3 cell_size() const;
  Box cell_box(const Index3& c) const;
  std::size_t size() const { return product(cells); }
};

enum class CellState : signed char { outside = -1, cut = 0, inside = 1 };

struct CellClassification {
  std::vector<CellState> state;  // per background cell, x fastest
  std::vector<Index3> inside, outside, cut;
};

/// Lattice samples per axis used for sign tests (plus vertices).
inline constexpr int kClassifySamples = 4;

/// Inside / outside / cut test of a box: f - g_crit sampled on a lattice with
/// kClassifySamples intervals per axis; boxes whose samples all share a sign
/// but come close to zero relative to the sampled slope are re-tested on
/// their children, up to `extra_depth` times.
CellState classify_box(const ImplicitGeometry& geom, const Box& box, int extra_depth = 3);

CellClassification classify_cells(const ImplicitGeometry& geom, const BackgroundMesh& mesh);

/// Piece of the inside domain of a cut cell: a whole sub-box or a simplex.
struct SubCell {
  int depth = 0;
  bool is_box = false;
  Box box;
  std::array<Vec3, 4> v{};  // simplex vertices (nd + 1 used)
  double measure(int nd) const;
};

/// Boundary facet: a segment (2D) or triangle (3D). `side` is -1 for the
/// immersed boundary, otherwise the exterior box side 2 * axis + (0: lo, 1: hi).
struct Facet {
  std::array<Vec3, 3> v{};
  Vec3 normal{0.0, 0.0, 0.0};  // unit, outward
  int side = -1;
  double measure(int nd) const;
};

struct CutCell {
  Index3 cell{0, 0, 0};
  std::vector<SubCell> parts;
  std::vector<Facet> facets;  // immersed boundary pieces
};

struct ExteriorFacet {
  Index3 cell{0, 0, 0};
  Facet facet;
};

struct TessellationParams {
  int rho_max = 3;
};

struct TessellatedDomain {
  int nd = 2;
  BackgroundMesh mesh;
  int rho_max = 3;
  std::vector<CellState> state;
  std::vector<Index3> interior_cells;
  std::vector<CutCell> cut_cells;
  std::vector<ExteriorFacet> exterior_facets;  // box faces where f > g_crit
  int degenerate_crossings = 0;                // crossings snapped onto a vertex

  double volume() const;
  double immersed_boundary_measure() const;
  double exterior_boundary_measure(int side) const;
  bool active(const Index3& c) const { return state[linear_index(c, mesh.cells)] != CellState::outside; }
  bool cut(const Index3& c) const { return state[linear_index(c, mesh.cells)] == CellState::cut; }
};

/// Recursively bisect one cut cell to depth rho_max and tessellate the leaves:
/// a leaf square is split into 4 triangles around its centre, a leaf cube into
/// 24 tetrahedra around its centre and face centres, and every simplex is cut
/// along the linear interpolant of the exact edge crossings.
CutCell tessellate_cell(const ImplicitGeometry& geom, const BackgroundMesh& mesh, const Index3& cell, int rho_max,
                        int* degenerate = nullptr);

TessellatedDomain tessellate(const ImplicitGeometry& geom, const BackgroundMesh& mesh,
                             const TessellationParams& params = {});

struct CellQuadrature {
  Index3 cell{0, 0, 0};
  bool cut = false;
  std::vector<QuadPoint> points;
};

struct FacetQuadrature {
  Index3 cell{0, 0, 0};
  int side = -1;
  Vec3 normal{0.0, 0.0, 0.0};
  std::vector<QuadPoint> points;
};

struct DomainQuadrature {
  int nd = 2;
  std::vector<CellQuadrature> cells;
  std::vector<FacetQuadrature> immersed;
  std::vector<FacetQuadrature> exterior;

  double integrate(const std::function<double(const Vec3&)>& g) const;
  double integrate_boundary(const std::function<double(const Vec3&, const Vec3&)>& g, bool with_exterior) const;
};

/// Interior cells use k_max, sub-cells the scheduled order of their depth,
/// facets k_max.
DomainQuadrature build_quadrature(const TessellatedDomain& domain, const QuadratureSchedule& schedule);

}  // namespace topoiga
