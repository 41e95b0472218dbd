#include "core/vtk_io.hpp"

#include <fstream>

namespace topoiga {

namespace {

constexpr int kLine = 3, kTriangle = 5, kPixel = 8, kTetra = 10, kVoxel = 11;

struct Grid {
  std::vector<Vec3> points;
  std::vector<std::vector<int>> cells;
  std::vector<int> types;
  std::vector<int> kinds;

  void add(const std::vector<Vec3>& pts, int type, int kind) {
    std::vector<int> ids;
    for (const Vec3& p : pts) {
      ids.push_back(static_cast<int>(points.size()));
      points.push_back(p);
    }
    cells.push_back(std::move(ids));
    types.push_back(type);
    kinds.push_back(kind);
  }

  void add_box(int nd, const Box& b, int kind) {
    std::vector<Vec3> pts;
    const int nz = nd > 2 ? 2 : 1;
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
          pts.push_back({i ? b.hi[0] : b.lo[0], j ? b.hi[1] : b.lo[1], k ? b.hi[2] : b.lo[2]});
    add(pts, nd > 2 ? kVoxel : kPixel, kind);
  }

  void add_facet(int nd, const Facet& f, int kind) {
    if (nd == 2)
      add({f.v[0], f.v[1]}, kLine, kind);
    else
      add({f.v[0], f.v[1], f.v[2]}, kTriangle, kind);
  }
};

}  // namespace

void write_tessellation_vtk(const std::string& path, const TessellatedDomain& domain,
                            const std::vector<VtkPointField>& fields) {
  const int nd = domain.nd;
  Grid g;
  for (const Index3& c : domain.interior_cells) g.add_box(nd, domain.mesh.cell_box(c), 0);
  for (const CutCell& cc : domain.cut_cells) {
    for (const SubCell& s : cc.parts) {
      if (s.is_box)
        g.add_box(nd, s.box, 1);
      else if (nd == 2)
        g.add({s.v[0], s.v[1], s.v[2]}, kTriangle, 1);
      else
        g.add({s.v[0], s.v[1], s.v[2], s.v[3]}, kTetra, 1);
    }
    for (const Facet& f : cc.facets) g.add_facet(nd, f, 2);
  }
  for (const ExteriorFacet& f : domain.exterior_facets) g.add_facet(nd, f.facet, 3);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(12);
  out << "# vtk DataFile Version 3.0\ntessellated domain\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << g.points.size() << " double\n";
  for (const Vec3& p : g.points) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  std::size_t entries = 0;
  for (const auto& c : g.cells) entries += c.size() + 1;
  out << "CELLS " << g.cells.size() << ' ' << entries << '\n';
  for (const auto& c : g.cells) {
    out << c.size();
    for (int id : c) out << ' ' << id;
    out << '\n';
  }
  out << "CELL_TYPES " << g.types.size() << '\n';
  for (int t : g.types) out << t << '\n';
  out << "CELL_DATA " << g.kinds.size() << "\nSCALARS kind int 1\nLOOKUP_TABLE default\n";
  for (int k : g.kinds) out << k << '\n';
  if (fields.empty()) return;
  out << "POINT_DATA " << g.points.size() << '\n';
  for (const VtkPointField& f : fields) {
    if (f.components == 1)
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    else
      out << "VECTORS " << f.name << " double\n";
    for (const Vec3& p : g.points) {
      const Vec3 v = f.value(p);
      if (f.components == 1)
        out << v[0] << '\n';
      else
        out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    }
  }
}

void write_structured_points_vtk(const std::string& path, int nd, const Index3& points, const Vec3& origin,
                                 const Vec3& spacing, const std::string& name, const std::vector<double>& values) {
  if (values.size() != product(points)) throw DimensionError("structured points: value count mismatch");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(12);
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << points[0] << ' ' << points[1] << ' ' << points[2] << '\n';
  out << "ORIGIN " << origin[0] << ' ' << origin[1] << ' ' << (nd > 2 ? origin[2] : 0.0) << '\n';
  out << "SPACING " << spacing[0] << ' ' << (nd > 1 ? spacing[1] : 1.0) << ' ' << (nd > 2 ? spacing[2] : 1.0)
      << '\n';
  out << "POINT_DATA " << values.size() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) out << v << '\n';
}

}  // namespace topoiga
