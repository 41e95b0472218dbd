#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "core/types.hpp"

namespace topoiga {

/// Grayscale scan data on a regular voxel lattice.
///
/// Values are stored normalized to [0, 1] with x varying fastest. Axes beyond
/// the image dimension carry a single voxel.
class VoxelGrid {
 public:
  VoxelGrid(int nd, Index3 dims, Vec3 spacing, Vec3 origin, std::vector<double> values);

  int dim() const { return nd_; }
  const Index3& dims() const { return dims_; }
  const Vec3& spacing() const { return spacing_; }
  const Vec3& origin() const { return origin_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double operator()(const Index3& i) const { return values_[linear_index(i, dims_)]; }

  /// The image box [origin, origin + dims * spacing].
  Box box() const;

  /// Voxel index containing a point (clamped to the image).
  Index3 voxel_of(const Vec3& x) const;

 private:
  int nd_;
  Index3 dims_;
  Vec3 spacing_;
  Vec3 origin_;
  std::vector<double> values_;
};

/// Boolean voxelization, possibly on an `subdivision`-times refined lattice.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int nd, Index3 dims, int subdivision = 1, bool value = false);
  BinaryImage(int nd, Index3 dims, int subdivision, std::vector<std::uint8_t> bits);

  int dim() const { return nd_; }
  const Index3& dims() const { return dims_; }
  int subdivision() const { return subdivision_; }
  std::size_t size() const { return bits_.size(); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool operator()(const Index3& i) const { return bits_[linear_index(i, dims_)] != 0; }
  bool operator[](std::size_t n) const { return bits_[n] != 0; }
  void set(const Index3& i, bool v) { bits_[linear_index(i, dims_)] = v ? 1 : 0; }
  void set(std::size_t n, bool v) { bits_[n] = v ? 1 : 0; }

  std::size_t count() const;
  bool any() const { return count() > 0; }
  bool inside(const Index3& i) const;

  /// Sub-image over the index range [lo, hi).
  BinaryImage crop(const Index3& lo, const Index3& hi) const;

  bool operator==(const BinaryImage& other) const = default;

 private:
  int nd_ = 2;
  Index3 dims_{0, 0, 1};
  int subdivision_ = 1;
  std::vector<std::uint8_t> bits_;
};

enum class Connectivity { vertex, face };

/// Background connectivity paired with a foreground connectivity.
inline Connectivity dual(Connectivity c) {
  return c == Connectivity::vertex ? Connectivity::face : Connectivity::vertex;
}

struct RegionLabeling {
  std::vector<int> labels;  // 0 = background, regions are 1..region_count
  int region_count = 0;
  Connectivity connectivity = Connectivity::vertex;
};

struct EulerSummary {
  std::vector<int> per_region_chi;  // indexed by label - 1
  int total_chi = 0;
  std::map<int, int> chi_multiset;  // chi value -> number of regions
};

BinaryImage threshold(const VoxelGrid& grid, double g_crit);

RegionLabeling label_components(const BinaryImage& img, Connectivity connectivity);

/// Euler characteristic per connected region.
///
/// 2D images count, per region, the bounded components of the region's
/// complement (holes, dual connectivity). 3D images use the alternating cell
/// count of the cubical complex spanned by each region.
EulerSummary euler_characteristic(const BinaryImage& img, Connectivity connectivity);

/// Euler characteristic from alternating cubical-complex counts V - E + F - C,
/// valid in 2D and 3D. Vertex connectivity uses the closed voxels, face
/// connectivity the complex on voxel centers.
EulerSummary cubical_euler_characteristic(const BinaryImage& img, Connectivity connectivity);

BinaryImage complement(const BinaryImage& a);
BinaryImage unite(const BinaryImage& a, const BinaryImage& b);
BinaryImage intersect(const BinaryImage& a, const BinaryImage& b);
BinaryImage symmetric_difference(const BinaryImage& a, const BinaryImage& b);

/// Replicate every cell factor^nd times.
BinaryImage upsample(const BinaryImage& img, int factor);

}  // namespace topoiga
