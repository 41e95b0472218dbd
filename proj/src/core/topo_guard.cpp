#include "core/topo_guard.hpp"

#include <algorithm>
#include <set>

namespace topoiga {

Window make_window(const Index3& center, int radius, const Index3& dims, int nd) {
  if (radius < 0) throw Error("window radius must be non-negative");
  Window w;
  w.center = center;
  w.radius = radius;
  for (int d = 0; d < nd; ++d) {
    w.lo[d] = std::max(0, center[d] - radius);
    w.hi[d] = std::min(dims[d], center[d] + radius + 1);
  }
  return w;
}

BinaryImage voxelize_smooth(const LevelSetField& field, int n_sub, double g_crit) {
  if (n_sub < 1) throw Error("n_sub must be positive");
  const HierarchicalMesh& mesh = field.basis().mesh();
  const int nd = mesh.dim();
  Index3 dims{1, 1, 1};
  Vec3 h{0.0, 0.0, 0.0};
  for (int d = 0; d < nd; ++d) {
    dims[d] = mesh.base_dims()[d] * n_sub;
    h[d] = mesh.box().length(d) / dims[d];
  }
  BinaryImage img(nd, dims, n_sub);
  for_each_index(nd, Index3{0, 0, 0}, dims, [&](const Index3& c) {
    Vec3 x{0.0, 0.0, 0.0};
    for (int d = 0; d < nd; ++d) x[d] = mesh.box().lo[d] + (c[d] + 0.5) * h[d];
    img.set(c, field(x) > g_crit);
  });
  return img;
}

namespace {

void check_pair(const BinaryImage& v, const BinaryImage& s) {
  if (v.dim() != s.dim() || v.dims() != s.dims() || v.subdivision() != s.subdivision())
    throw DimensionError("window images are not on a shared grid");
}

}  // namespace

ComparisonReport compare_window(const BinaryImage& v, const BinaryImage& s, Connectivity connectivity) {
  check_pair(v, s);
  ComparisonReport r;
  r.chi_v = euler_characteristic(v, connectivity).chi_multiset;
  r.chi_s = euler_characteristic(s, connectivity).chi_multiset;
  // Complements use the same connectivity as the images; with the dual one
  // C(V, S) and C(V', S') would weigh the two images differently.
  r.chi_v_complement = euler_characteristic(complement(v), connectivity).chi_multiset;
  r.chi_s_complement = euler_characteristic(complement(s), connectivity).chi_multiset;
  r.verdict = r.chi_v == r.chi_s && r.chi_v_complement == r.chi_s_complement;
  return r;
}

BinaryImage boundary_mask(const BinaryImage& v, const BinaryImage& s, Connectivity connectivity, int* region_count) {
  check_pair(v, s);
  const BinaryImage diff = symmetric_difference(v, s);
  const int nd = v.dim();
  const Index3& dims = v.dims();
  const int ring = v.subdivision();
  const auto lab = label_components(diff, connectivity);
  const auto chi = euler_characteristic(diff, connectivity).per_region_chi;
  // A region qualifies if none of its cells lies inside the ring.
  std::vector<std::uint8_t> qualifies(lab.region_count, 1);
  for (std::size_t n = 0; n < lab.labels.size(); ++n) {
    const int r = lab.labels[n];
    if (r == 0) continue;
    const Index3 i = unravel_index(n, dims);
    bool interior = true;
    for (int d = 0; d < nd; ++d)
      if (i[d] < ring || i[d] >= dims[d] - ring) interior = false;
    if (interior) qualifies[r - 1] = 0;
  }
  BinaryImage mask(nd, dims, v.subdivision());
  int count = 0;
  for (int r = 0; r < lab.region_count; ++r) {
    qualifies[r] = qualifies[r] && chi[r] == 1;
    count += qualifies[r];
  }
  for (std::size_t n = 0; n < lab.labels.size(); ++n)
    if (lab.labels[n] != 0 && qualifies[lab.labels[n] - 1]) mask.set(n, true);
  if (region_count) *region_count = count;
  return mask;
}

BinaryImage apply_mask(const BinaryImage& v, const BinaryImage& s, const BinaryImage& mask) {
  check_pair(v, s);
  check_pair(v, mask);
  return unite(intersect(mask, v), intersect(complement(mask), s));
}

ComparisonReport compare_masked(const BinaryImage& v, const BinaryImage& s, Connectivity connectivity) {
  int regions = 0;
  const BinaryImage m = boundary_mask(v, s, connectivity, &regions);
  ComparisonReport r = compare_window(v, apply_mask(v, s, m), connectivity);
  r.mask_region_count = regions;
  return r;
}

BinaryImage scan(const BinaryImage& voxels, const BinaryImage& smooth, int radius, Connectivity connectivity) {
  if (voxels.subdivision() != 1) throw DimensionError("voxel segmentation must be at subdivision 1");
  const int n_sub = smooth.subdivision();
  const int nd = voxels.dim();
  for (int d = 0; d < 3; ++d)
    if (smooth.dims()[d] != voxels.dims()[d] * (d < nd ? n_sub : 1))
      throw DimensionError("smooth image is not a refinement of the voxel grid");
  const BinaryImage up = upsample(voxels, n_sub);
  BinaryImage flags(nd, voxels.dims(), 1);
  // Windows are independent; the indicator does not depend on visit order.
  for_each_index(nd, Index3{0, 0, 0}, voxels.dims(), [&](const Index3& c) {
    const Window w = make_window(c, radius, voxels.dims(), nd);
    Index3 lo{0, 0, 0}, hi{1, 1, 1};
    for (int d = 0; d < nd; ++d) {
      lo[d] = w.lo[d] * n_sub;
      hi[d] = w.hi[d] * n_sub;
    }
    const BinaryImage vw = up.crop(lo, hi), sw = smooth.crop(lo, hi);
    if (vw == sw) return;
    flags.set(c, !compare_masked(vw, sw, connectivity).verdict);
  });
  return flags;
}

std::vector<LevelCell> mark_refinement(const BinaryImage& indicator, const HierarchicalMesh& mesh) {
  if (indicator.dims() != mesh.base_dims()) throw DimensionError("indicator does not match the mesh base grid");
  std::set<LevelCell> marks;
  for_each_index(mesh.dim(), Index3{0, 0, 0}, indicator.dims(), [&](const Index3& c) {
    if (!indicator(c)) return;
    for (const LevelCell& a : mesh.active_descendants({0, c})) marks.insert(a);
  });
  return {marks.begin(), marks.end()};
}

int ring_indicator_count(const BinaryImage& indicator) {
  const auto e = euler_characteristic(indicator, Connectivity::vertex);
  int rings = 0;
  for (int chi : e.per_region_chi)
    if (chi < 1) ++rings;
  return rings;
}

TopologyResult preserve_topology(const VoxelGrid& grid, const TopologyParams& params) {
  const BinaryImage voxels = threshold(grid, params.g_crit);
  HierarchicalMesh mesh = base_mesh(grid);
  TopologyResult result{mesh, smooth_level_set(grid, mesh, params.degree), {}, 0, false, {}};
  for (int pass = 0;; ++pass) {
    if (pass > 0) result.field = smooth_level_set(grid, mesh, params.degree);
    result.mesh = mesh;
    const BinaryImage smooth = voxelize_smooth(result.field, params.n_sub, params.g_crit);
    BinaryImage indicator = scan(voxels, smooth, params.radius, params.connectivity);
    result.indicators.push_back(indicator);
    if (!indicator.any()) {
      result.converged = true;
      break;
    }
    if (pass >= params.max_passes) break;
    if (const int rings = ring_indicator_count(indicator); rings > 0)
      result.warnings.push_back("pass " + std::to_string(pass) + ": " + std::to_string(rings) +
                                " ring-shaped indicator region(s); enclosed voxels are not refined");
    mesh = mesh.refine(mark_refinement(indicator, mesh), params.degree);
    ++result.refinements;
  }
  return result;
}

}  // namespace topoiga
