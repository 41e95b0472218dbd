#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/tessellation.hpp"

namespace topoiga {

/// Point field sampled at every output vertex.
struct VtkPointField {
  std::string name;
  int components = 1;  // 1 or 3
  std::function<Vec3(const Vec3&)> value;
};

/// Legacy-VTK unstructured grid of a tessellated domain: interior cells, cut
/// sub-cells and boundary facets, tagged by the cell scalar "kind"
/// (0 interior, 1 sub-cell, 2 immersed facet, 3 exterior facet).
void write_tessellation_vtk(const std::string& path, const TessellatedDomain& domain,
                            const std::vector<VtkPointField>& fields = {});

/// Legacy-VTK structured points with one scalar per point.
void write_structured_points_vtk(const std::string& path, int nd, const Index3& points, const Vec3& origin,
                                 const Vec3& spacing, const std::string& name, const std::vector<double>& values);

}  // namespace topoiga
