#include "core/hierarchical_mesh.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace topoiga {

HierarchicalMesh::HierarchicalMesh(int nd, Index3 base_dims, Box box) : nd_(nd), base_(base_dims), box_(box) {
  if (nd_ < 1 || nd_ > 3) throw DimensionError("mesh dimension must be 1, 2 or 3");
  for (int d = 0; d < 3; ++d) {
    if (d >= nd_) {
      base_[d] = 1;
      continue;
    }
    if (base_[d] < 1) throw DimensionError("mesh needs at least one cell per axis");
    if (!(box_.length(d) > 0.0)) throw DimensionError("mesh box must have positive extent");
  }
}

Index3 HierarchicalMesh::level_dims(int level) const {
  Index3 n = base_;
  for (int d = 0; d < nd_; ++d) n[d] = base_[d] << level;
  return n;
}

Vec3 HierarchicalMesh::cell_size(int level) const {
  Vec3 h{0.0, 0.0, 0.0};
  const Index3 n = level_dims(level);
  for (int d = 0; d < nd_; ++d) h[d] = box_.length(d) / n[d];
  return h;
}

Box HierarchicalMesh::cell_box(const LevelCell& c) const {
  const Vec3 h = cell_size(c.level);
  Box b;
  for (int d = 0; d < nd_; ++d) {
    b.lo[d] = box_.lo[d] + c.cell[d] * h[d];
    b.hi[d] = b.lo[d] + h[d];
  }
  return b;
}

bool HierarchicalMesh::in_region(int level, const Index3& cell) const {
  if (level == 0) return true;
  if (level > max_level()) return false;
  return regions_[level - 1][linear_index(parent_cell(cell, nd_), level_dims(level - 1))] != 0;
}

bool HierarchicalMesh::refined(int level, const Index3& cell) const {
  if (level >= max_level()) return false;
  return regions_[level][linear_index(cell, level_dims(level))] != 0;
}

std::vector<LevelCell> HierarchicalMesh::active_cells() const {
  std::vector<LevelCell> out;
  for (int l = 0; l <= max_level(); ++l)
    for_each_index(nd_, Index3{0, 0, 0}, level_dims(l), [&](const Index3& c) {
      if (active({l, c})) out.push_back({l, c});
    });
  return out;
}

std::size_t HierarchicalMesh::active_count() const { return active_cells().size(); }

LevelCell HierarchicalMesh::locate(const Vec3& x) const {
  LevelCell c{0, {0, 0, 0}};
  const Vec3 h0 = cell_size(0);
  for (int d = 0; d < nd_; ++d)
    c.cell[d] = std::clamp(static_cast<int>(std::floor((x[d] - box_.lo[d]) / h0[d])), 0, base_[d] - 1);
  while (refined(c.level, c.cell)) {
    const Vec3 h = cell_size(c.level + 1);
    LevelCell child{c.level + 1, c.cell};
    for (int d = 0; d < nd_; ++d) {
      const int k = static_cast<int>(std::floor((x[d] - box_.lo[d]) / h[d]));
      child.cell[d] = std::clamp(k, 2 * c.cell[d], 2 * c.cell[d] + 1);
    }
    c = child;
  }
  return c;
}

std::vector<LevelCell> HierarchicalMesh::active_descendants(const LevelCell& c) const {
  if (!in_region(c.level, c.cell)) return {};
  if (!refined(c.level, c.cell)) return {c};
  std::vector<LevelCell> out;
  Index3 lo = c.cell, hi = c.cell;
  for (int d = 0; d < nd_; ++d) {
    lo[d] = 2 * c.cell[d];
    hi[d] = 2 * c.cell[d] + 2;
  }
  for_each_index(nd_, lo, hi, [&](const Index3& child) {
    for (const LevelCell& a : active_descendants({c.level + 1, child})) out.push_back(a);
  });
  return out;
}

void HierarchicalMesh::mark_region(int level, const Index3& coarse_cell) {
  // Omega^level gains the level-(level-1) cell; keep Omega^level inside Omega^(level-1).
  while (max_level() < level) regions_.emplace_back(product(level_dims(max_level())), 0);
  auto& mask = regions_[level - 1];
  const std::size_t k = linear_index(coarse_cell, level_dims(level - 1));
  if (mask[k]) return;
  mask[k] = 1;
  if (level >= 2 && !in_region(level - 1, coarse_cell)) mark_region(level - 1, parent_cell(coarse_cell, nd_));
}

HierarchicalMesh HierarchicalMesh::refine(const std::vector<LevelCell>& marked, int degree) const {
  for (const LevelCell& c : marked) {
    if (c.level < 0 || c.level > max_level()) throw Error("marked cell has an invalid level");
    const Index3 n = level_dims(c.level);
    for (int d = 0; d < 3; ++d)
      if (c.cell[d] < 0 || c.cell[d] >= n[d]) throw Error("marked cell outside the mesh");
    if (!active(c)) throw Error("marked cell is not active");
  }
  HierarchicalMesh out = *this;
  for (const LevelCell& c : marked) {
    const Index3 n = level_dims(c.level);
    Index3 lo{0, 0, 0}, hi{1, 1, 1};
    for (int d = 0; d < nd_; ++d) {
      lo[d] = std::max(0, c.cell[d] - degree);
      hi[d] = std::min(n[d], c.cell[d] + degree + 1);
    }
    for_each_index(nd_, lo, hi, [&](const Index3& s) { out.mark_region(c.level + 1, s); });
  }
  return out;
}

bool HierarchicalMesh::is_nested() const {
  for (int l = 2; l <= max_level(); ++l) {
    bool ok = true;
    for_each_index(nd_, Index3{0, 0, 0}, level_dims(l - 1), [&](const Index3& c) {
      if (regions_[l - 1][linear_index(c, level_dims(l - 1))] && !in_region(l - 1, c)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

void HierarchicalMesh::write(std::ostream& os) const {
  os.precision(17);
  os << "TPIMESH 1\n";
  os << "ndim " << nd_ << "\n";
  os << "dims " << base_[0] << ' ' << base_[1] << ' ' << base_[2] << "\n";
  os << "lo " << box_.lo[0] << ' ' << box_.lo[1] << ' ' << box_.lo[2] << "\n";
  os << "hi " << box_.hi[0] << ' ' << box_.hi[1] << ' ' << box_.hi[2] << "\n";
  os << "levels " << max_level() << "\n";
  for (int l = 1; l <= max_level(); ++l) {
    // Runs of consecutive linear indices on the level-(l-1) grid.
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    const auto& mask = regions_[l - 1];
    for (std::size_t k = 0; k < mask.size(); ++k) {
      if (!mask[k]) continue;
      if (!runs.empty() && runs.back().first + runs.back().second == k)
        ++runs.back().second;
      else
        runs.emplace_back(k, 1);
    }
    os << "level " << l << " runs " << runs.size() << "\n";
    for (const auto& [start, len] : runs) os << start << ' ' << len << "\n";
  }
}

HierarchicalMesh HierarchicalMesh::read(std::istream& is) {
  auto expect = [&](const std::string& key) {
    std::string word;
    if (!(is >> word) || word != key) throw FormatError("mesh file: expected '" + key + "'");
  };
  expect("TPIMESH");
  int version = 0;
  if (!(is >> version) || version != 1) throw FormatError("mesh file: unsupported version");
  int nd = 0;
  Index3 dims{1, 1, 1};
  Box box;
  expect("ndim");
  is >> nd;
  expect("dims");
  is >> dims[0] >> dims[1] >> dims[2];
  expect("lo");
  is >> box.lo[0] >> box.lo[1] >> box.lo[2];
  expect("hi");
  is >> box.hi[0] >> box.hi[1] >> box.hi[2];
  int levels = 0;
  expect("levels");
  is >> levels;
  if (!is || levels < 0) throw FormatError("mesh file: malformed header");
  HierarchicalMesh mesh(nd, dims, box);
  for (int l = 1; l <= levels; ++l) {
    int tag = 0;
    std::size_t nruns = 0;
    expect("level");
    is >> tag;
    expect("runs");
    is >> nruns;
    if (!is || tag != l) throw FormatError("mesh file: levels out of order");
    mesh.regions_.emplace_back(product(mesh.level_dims(l - 1)), 0);
    auto& mask = mesh.regions_.back();
    for (std::size_t r = 0; r < nruns; ++r) {
      std::size_t start = 0, len = 0;
      if (!(is >> start >> len) || start + len > mask.size()) throw FormatError("mesh file: run out of range");
      std::fill(mask.begin() + start, mask.begin() + start + len, 1);
    }
  }
  if (!mesh.is_nested()) throw FormatError("mesh file: regions are not nested");
  return mesh;
}

}  // namespace topoiga
