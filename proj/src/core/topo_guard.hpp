#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/thb_basis.hpp"
#include "core/voxel_image.hpp"

namespace topoiga {

/// r-neighbourhood of a base voxel clipped to the image, as a range [lo, hi).
struct Window {
  Index3 center{0, 0, 0};
  int radius = 1;
  Index3 lo{0, 0, 0};
  Index3 hi{1, 1, 1};
};

Window make_window(const Index3& center, int radius, const Index3& dims, int nd);

struct ComparisonReport {
  bool verdict = true;
  std::map<int, int> chi_v, chi_s, chi_v_complement, chi_s_complement;
  int mask_region_count = 0;
};

/// True cells where f(cell centre) > g_crit on the base grid refined n_sub times.
BinaryImage voxelize_smooth(const LevelSetField& field, int n_sub, double g_crit);

/// Region-count comparison of V and S and of their complements: true iff every
/// Euler characteristic occurs equally often.
ComparisonReport compare_window(const BinaryImage& v, const BinaryImage& s,
                                Connectivity connectivity = Connectivity::vertex);

/// Regions of V xor S with chi = 1 that lie entirely in the outer ring of the
/// window. The ring is one base voxel (subdivision cells) thick.
BinaryImage boundary_mask(const BinaryImage& v, const BinaryImage& s, Connectivity connectivity = Connectivity::vertex,
                          int* region_count = nullptr);

/// F = (M and V) or (not M and S).
BinaryImage apply_mask(const BinaryImage& v, const BinaryImage& s, const BinaryImage& mask);

/// Masked comparison of V and S on one window: C(V, F(V, S)).
ComparisonReport compare_masked(const BinaryImage& v, const BinaryImage& s,
                                Connectivity connectivity = Connectivity::vertex);

/// Moving-window scan. `voxels` is the direct segmentation (subdivision 1),
/// `smooth` the voxelized level set at subdivision n_sub. A base voxel is
/// flagged when the masked comparison on its window fails.
BinaryImage scan(const BinaryImage& voxels, const BinaryImage& smooth, int radius,
                 Connectivity connectivity = Connectivity::vertex);

/// Active cells overlapping flagged base voxels, without duplicates.
std::vector<LevelCell> mark_refinement(const BinaryImage& indicator, const HierarchicalMesh& mesh);

struct TopologyParams {
  int degree = 2;
  double g_crit = 0.5;
  int radius = 1;
  int n_sub = 3;  // defaults to the tessellation depth
  int max_passes = 1;
  Connectivity connectivity = Connectivity::vertex;
};

struct TopologyResult {
  HierarchicalMesh mesh;
  LevelSetField field;
  std::vector<BinaryImage> indicators;  // one per evaluated pass
  int refinements = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// convolve -> voxelize -> scan -> mark -> refine until the indicator is empty
/// or max_passes refinements have been made.
TopologyResult preserve_topology(const VoxelGrid& grid, const TopologyParams& params);

/// Indicator regions that enclose unflagged voxels (ring-shaped indicators).
int ring_indicator_count(const BinaryImage& indicator);

}  // namespace topoiga
