#pragma once

#include <vector>

#include "core/voxel_image.hpp"

namespace topoiga::fixtures {

/// Fill the inclusive voxel rectangle [x0, x1] x [y0, y1] with g.
inline void fill(std::vector<double>& v, int nx, int x0, int x1, int y0, int y1, double g) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) v[x + nx * y] = g;
}

inline VoxelGrid square_image(int n, const std::vector<double>& v) {
  return VoxelGrid(2, {n, n, 1}, {1.0 / n, 1.0 / n, 1.0}, {0.0, 0.0, 0.0}, v);
}

/// Two blocks joined by a one-voxel bridge (g = 0.7) and a block whose void
/// pocket opens to the outside through a one-voxel channel (g = 0.3). Direct
/// segmentation: two simply connected regions. Uniform smoothing at h = voxel
/// size breaks the bridge and closes the channel.
inline VoxelGrid bridge_and_channel() {
  const int n = 35;
  std::vector<double> v(n * n, 0.0);
  fill(v, n, 3, 12, 4, 16, 1.0);
  fill(v, n, 3, 12, 20, 30, 1.0);
  fill(v, n, 7, 7, 17, 19, 0.7);
  fill(v, n, 20, 31, 8, 26, 1.0);
  fill(v, n, 24, 26, 15, 17, 0.0);
  fill(v, n, 27, 31, 16, 16, 0.3);
  return square_image(n, v);
}

/// Frame between a bottom and a top bar: a solid right column and a left
/// column interrupted by a one-voxel bridge (g = 0.7).
inline VoxelGrid bridged_frame() {
  const int n = 32;
  std::vector<double> v(n * n, 0.0);
  fill(v, n, 0, 31, 0, 3, 1.0);
  fill(v, n, 0, 31, 28, 31, 1.0);
  fill(v, n, 22, 27, 4, 27, 1.0);
  fill(v, n, 4, 9, 4, 13, 1.0);
  fill(v, n, 4, 9, 17, 27, 1.0);
  fill(v, n, 6, 6, 14, 16, 0.7);
  return square_image(n, v);
}

/// Inflow trunk at the bottom, a manifold, and two branches reaching the top;
/// the left branch is pinched to a single voxel column (g = 0.7).
inline VoxelGrid two_branches() {
  const int n = 32;
  std::vector<double> v(n * n, 0.0);
  fill(v, n, 12, 19, 0, 9, 1.0);
  fill(v, n, 4, 27, 10, 15, 1.0);
  fill(v, n, 4, 9, 16, 19, 1.0);
  fill(v, n, 4, 9, 23, 31, 1.0);
  fill(v, n, 6, 6, 20, 22, 0.7);
  fill(v, n, 22, 27, 16, 31, 1.0);
  return square_image(n, v);
}

/// Solid channel of width 1/aspect and unit length (voxel size 1/(4 aspect)).
inline VoxelGrid straight_channel(int aspect) {
  const int nx = 4, ny = 4 * aspect;
  const double h = 1.0 / ny;
  return VoxelGrid(2, {nx, ny, 1}, {h, h, 1.0}, {0.0, 0.0, 0.0}, std::vector<double>(nx * ny, 1.0));
}

/// Image with no features near the voxel scale: a filled disk of radius 8 voxels.
inline VoxelGrid disk(int n = 24) {
  std::vector<double> v(n * n, 0.0);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const double dx = x + 0.5 - n / 2.0, dy = y + 0.5 - n / 2.0;
      if (dx * dx + dy * dy < 64.0) v[x + n * y] = 1.0;
    }
  return square_image(n, v);
}

}  // namespace topoiga::fixtures
