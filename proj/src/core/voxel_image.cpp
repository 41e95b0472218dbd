#include "core/voxel_image.hpp"

#include <algorithm>
#include <numeric>

namespace topoiga {

namespace {

void check_shape(int nd, const Index3& dims) {
  if (nd != 1 && nd != 2 && nd != 3) throw DimensionError("image dimension must be 1, 2 or 3");
  for (int d = 0; d < 3; ++d) {
    if (d < nd && dims[d] < 1) throw DimensionError("image dims must be positive");
    if (d >= nd && dims[d] != 1) throw DimensionError("unused axes must have extent 1");
  }
}

std::vector<Index3> neighbor_offsets(int nd, Connectivity c) {
  std::vector<Index3> off;
  const int kz = nd > 2 ? 1 : 0;
  const int ky = nd > 1 ? 1 : 0;
  for (int k = -kz; k <= kz; ++k)
    for (int j = -ky; j <= ky; ++j)
      for (int i = -1; i <= 1; ++i) {
        const int nz = (i != 0) + (j != 0) + (k != 0);
        if (nz == 0) continue;
        if (c == Connectivity::face && nz != 1) continue;
        off.push_back({i, j, k});
      }
  return off;
}

void check_same(const BinaryImage& a, const BinaryImage& b) {
  if (a.dim() != b.dim() || a.dims() != b.dims() || a.subdivision() != b.subdivision())
    throw DimensionError("binary images differ in shape or subdivision");
}

// Labels every connected component of cells where `member(n)` holds.
int flood_label(int nd, const Index3& dims, Connectivity c, const std::vector<std::uint8_t>& member,
                std::vector<int>& labels) {
  const auto offsets = neighbor_offsets(nd, c);
  labels.assign(member.size(), 0);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < member.size(); ++seed) {
    if (!member[seed] || labels[seed] != 0) continue;
    labels[seed] = ++next;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      const Index3 i = unravel_index(n, dims);
      for (const auto& o : offsets) {
        const Index3 q{i[0] + o[0], i[1] + o[1], i[2] + o[2]};
        if (q[0] < 0 || q[1] < 0 || q[2] < 0 || q[0] >= dims[0] || q[1] >= dims[1] || q[2] >= dims[2]) continue;
        const std::size_t m = linear_index(q, dims);
        if (member[m] && labels[m] == 0) {
          labels[m] = next;
          stack.push_back(m);
        }
      }
    }
  }
  return next;
}

EulerSummary summarize(std::vector<int> per_region) {
  EulerSummary s;
  s.per_region_chi = std::move(per_region);
  for (int chi : s.per_region_chi) {
    s.total_chi += chi;
    ++s.chi_multiset[chi];
  }
  return s;
}

// Holes of each region in a 2D (or 1D) image: bounded components of the
// region's complement under the dual connectivity.
EulerSummary hole_based_euler(const BinaryImage& img, Connectivity connectivity) {
  const auto lab = label_components(img, connectivity);
  const int nd = img.dim();
  const Index3& dims = img.dims();
  std::vector<Index3> lo(lab.region_count, Index3{dims[0], dims[1], dims[2]});
  std::vector<Index3> hi(lab.region_count, Index3{-1, -1, -1});
  for (std::size_t n = 0; n < lab.labels.size(); ++n) {
    const int r = lab.labels[n];
    if (r == 0) continue;
    const Index3 i = unravel_index(n, dims);
    for (int d = 0; d < 3; ++d) {
      lo[r - 1][d] = std::min(lo[r - 1][d], i[d]);
      hi[r - 1][d] = std::max(hi[r - 1][d], i[d]);
    }
  }

  std::vector<int> chi(lab.region_count, 1);
  std::vector<int> hole_labels;
  for (int r = 1; r <= lab.region_count; ++r) {
    // Padded bounding box; the one-cell pad ring links every unbounded
    // complement component together.
    Index3 pdims{1, 1, 1}, base{0, 0, 0};
    for (int d = 0; d < nd; ++d) {
      base[d] = lo[r - 1][d] - 1;
      pdims[d] = hi[r - 1][d] - lo[r - 1][d] + 3;
    }
    std::vector<std::uint8_t> outside(product(pdims), 1);
    for_each_index(nd, Index3{1, 1, 1}, Index3{pdims[0] - 1, pdims[1] - 1, pdims[2] - 1}, [&](const Index3& p) {
      Index3 g{p[0] + base[0], p[1] + base[1], p[2] + base[2]};
      if (nd < 3) g[2] = 0;
      if (nd < 2) g[1] = 0;
      Index3 pp = p;
      if (nd < 3) pp[2] = 0;
      if (nd < 2) pp[1] = 0;
      outside[linear_index(pp, pdims)] = lab.labels[linear_index(g, dims)] == r ? 0 : 1;
    });
    const int ncomp = flood_label(nd, pdims, dual(connectivity), outside, hole_labels);
    // The pad corner always belongs to the unbounded component.
    const int unbounded = hole_labels[0];
    chi[r - 1] = 1 - (ncomp - (unbounded != 0 ? 1 : 0));
  }
  return summarize(std::move(chi));
}

}  // namespace

VoxelGrid::VoxelGrid(int nd, Index3 dims, Vec3 spacing, Vec3 origin, std::vector<double> values)
    : nd_(nd), dims_(dims), spacing_(spacing), origin_(origin), values_(std::move(values)) {
  check_shape(nd_, dims_);
  if (values_.size() != product(dims_)) throw DimensionError("voxel value count does not match dims");
  for (int d = 0; d < nd_; ++d)
    if (!(spacing_[d] > 0.0)) throw DimensionError("voxel spacing must be strictly positive");
  for (int d = nd_; d < 3; ++d) {
    origin_[d] = 0.0;
    spacing_[d] = 1.0;
  }
}

Box VoxelGrid::box() const {
  Box b;
  for (int d = 0; d < nd_; ++d) {
    b.lo[d] = origin_[d];
    b.hi[d] = origin_[d] + dims_[d] * spacing_[d];
  }
  return b;
}

Index3 VoxelGrid::voxel_of(const Vec3& x) const {
  Index3 i{0, 0, 0};
  for (int d = 0; d < nd_; ++d) {
    const int k = static_cast<int>(std::floor((x[d] - origin_[d]) / spacing_[d]));
    i[d] = std::clamp(k, 0, dims_[d] - 1);
  }
  return i;
}

BinaryImage::BinaryImage(int nd, Index3 dims, int subdivision, bool value)
    : nd_(nd), dims_(dims), subdivision_(subdivision), bits_(product(dims), value ? 1 : 0) {
  check_shape(nd_, dims_);
  if (subdivision_ < 1) throw DimensionError("subdivision must be positive");
}

BinaryImage::BinaryImage(int nd, Index3 dims, int subdivision, std::vector<std::uint8_t> bits)
    : nd_(nd), dims_(dims), subdivision_(subdivision), bits_(std::move(bits)) {
  check_shape(nd_, dims_);
  if (subdivision_ < 1) throw DimensionError("subdivision must be positive");
  if (bits_.size() != product(dims_)) throw DimensionError("bit count does not match dims");
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryImage::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryImage::inside(const Index3& i) const {
  for (int d = 0; d < 3; ++d)
    if (i[d] < 0 || i[d] >= dims_[d]) return false;
  return true;
}

BinaryImage BinaryImage::crop(const Index3& lo, const Index3& hi) const {
  Index3 dims{1, 1, 1};
  for (int d = 0; d < nd_; ++d) {
    if (lo[d] < 0 || hi[d] > dims_[d] || hi[d] <= lo[d]) throw DimensionError("crop range outside image");
    dims[d] = hi[d] - lo[d];
  }
  BinaryImage out(nd_, dims, subdivision_);
  Index3 l = lo, h = hi;
  for (int d = nd_; d < 3; ++d) {
    l[d] = 0;
    h[d] = 1;
  }
  for_each_index(nd_, l, h, [&](const Index3& i) {
    out.set(Index3{i[0] - l[0], i[1] - l[1], i[2] - l[2]}, (*this)(i));
  });
  return out;
}

BinaryImage threshold(const VoxelGrid& grid, double g_crit) {
  std::vector<std::uint8_t> bits(grid.size());
  for (std::size_t n = 0; n < bits.size(); ++n) bits[n] = grid.values()[n] > g_crit ? 1 : 0;
  return BinaryImage(grid.dim(), grid.dims(), 1, std::move(bits));
}

RegionLabeling label_components(const BinaryImage& img, Connectivity connectivity) {
  RegionLabeling out;
  out.connectivity = connectivity;
  out.region_count = flood_label(img.dim(), img.dims(), connectivity, img.bits(), out.labels);
  return out;
}

EulerSummary cubical_euler_characteristic(const BinaryImage& img, Connectivity connectivity) {
  const auto lab = label_components(img, connectivity);
  const int nd = img.dim();
  const Index3& dims = img.dims();
  std::vector<int> chi(lab.region_count, 0);

  // Enumerate the elementary cubes of the lattice by their "cube offset"
  // patterns: a k-cube is a set of 2^k grid sites along k axes. For vertex
  // connectivity the sites are lattice vertices of closed voxels; for face
  // connectivity they are voxel centres.
  if (connectivity == Connectivity::face) {
    // Complex on voxel centres: a k-cube is present iff all 2^k voxels are set.
    for (int mask = 0; mask < (1 << nd); ++mask) {
      const int k = __builtin_popcount(static_cast<unsigned>(mask));
      const int sign = (k % 2 == 0) ? 1 : -1;
      Index3 hi = dims;
      for (int d = 0; d < nd; ++d)
        if (mask & (1 << d)) hi[d] -= 1;
      if (hi[0] <= 0 || hi[1] <= 0 || hi[2] <= 0) continue;
      for_each_index(nd, Index3{0, 0, 0}, hi, [&](const Index3& base) {
        int region = -1;
        for (int c = 0; c < (1 << nd); ++c) {
          if ((c & ~mask) != 0) continue;
          Index3 q = base;
          for (int d = 0; d < nd; ++d)
            if (c & (1 << d)) q[d] += 1;
          const int r = lab.labels[linear_index(q, dims)];
          if (r == 0) return;
          region = r;
        }
        chi[region - 1] += sign;
      });
    }
    return summarize(std::move(chi));
  }

  // Closed voxels: a lattice k-face (2^k vertices) is present iff some incident
  // voxel is set; vertex-disjoint regions never share a face.
  Index3 vdims{1, 1, 1};
  for (int d = 0; d < nd; ++d) vdims[d] = dims[d] + 1;
  for (int mask = 0; mask < (1 << nd); ++mask) {
    const int k = __builtin_popcount(static_cast<unsigned>(mask));
    const int sign = (k % 2 == 0) ? 1 : -1;
    Index3 hi = vdims;
    for (int d = 0; d < nd; ++d)
      if (mask & (1 << d)) hi[d] -= 1;
    for_each_index(nd, Index3{0, 0, 0}, hi, [&](const Index3& base) {
      // Incident voxels vary by -1/0 along the axes not spanned by the face.
      int region = 0;
      for (int c = 0; c < (1 << nd) && region == 0; ++c) {
        if ((c & mask) != 0) continue;
        Index3 q = base;
        bool ok = true;
        for (int d = 0; d < nd; ++d) {
          if (c & (1 << d)) q[d] -= 1;
          if (q[d] < 0 || q[d] >= dims[d]) ok = false;
        }
        if (ok) region = lab.labels[linear_index(q, dims)];
      }
      if (region != 0) chi[region - 1] += sign;
    });
  }
  return summarize(std::move(chi));
}

EulerSummary euler_characteristic(const BinaryImage& img, Connectivity connectivity) {
  if (img.dim() <= 2) return hole_based_euler(img, connectivity);
  return cubical_euler_characteristic(img, connectivity);
}

BinaryImage complement(const BinaryImage& a) {
  auto bits = a.bits();
  for (auto& b : bits) b = b ? 0 : 1;
  return BinaryImage(a.dim(), a.dims(), a.subdivision(), std::move(bits));
}

namespace {
template <class Op>
BinaryImage combine(const BinaryImage& a, const BinaryImage& b, Op op) {
  check_same(a, b);
  std::vector<std::uint8_t> bits(a.size());
  for (std::size_t n = 0; n < bits.size(); ++n) bits[n] = op(a[n], b[n]) ? 1 : 0;
  return BinaryImage(a.dim(), a.dims(), a.subdivision(), std::move(bits));
}
}  // namespace

BinaryImage unite(const BinaryImage& a, const BinaryImage& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}
BinaryImage intersect(const BinaryImage& a, const BinaryImage& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}
BinaryImage symmetric_difference(const BinaryImage& a, const BinaryImage& b) {
  return combine(a, b, [](bool x, bool y) { return x != y; });
}

BinaryImage upsample(const BinaryImage& img, int factor) {
  if (factor < 1) throw DimensionError("upsample factor must be positive");
  Index3 dims = img.dims();
  for (int d = 0; d < img.dim(); ++d) dims[d] *= factor;
  BinaryImage out(img.dim(), dims, img.subdivision() * factor);
  for_each_index(img.dim(), Index3{0, 0, 0}, dims, [&](const Index3& i) {
    Index3 c = i;
    for (int d = 0; d < img.dim(); ++d) c[d] = i[d] / factor;
    out.set(i, img(c));
  });
  return out;
}

}  // namespace topoiga
