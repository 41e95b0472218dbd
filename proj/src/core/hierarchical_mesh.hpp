#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "core/types.hpp"

namespace topoiga {

/// A cell of the level-`level` dyadic grid.
struct LevelCell {
  int level = 0;
  Index3 cell{0, 0, 0};
  bool operator==(const LevelCell&) const = default;
  auto operator<=>(const LevelCell&) const = default;
};

/// Nested dyadic refinement regions Omega^0 = box, Omega^1, ..., Omega^L.
///
/// Omega^(l+1) is always a union of level-l cells and is stored as a mask on
/// the level-l grid. Level l has base_dims * 2^l cells on the used axes.
class HierarchicalMesh {
 public:
  HierarchicalMesh(int nd, Index3 base_dims, Box box);

  int dim() const { return nd_; }
  const Index3& base_dims() const { return base_; }
  const Box& box() const { return box_; }
  int max_level() const { return static_cast<int>(regions_.size()); }

  Index3 level_dims(int level) const;
  Vec3 cell_size(int level) const;
  Box cell_box(const LevelCell& c) const;

  /// Whether the level-l cell lies in Omega^l.
  bool in_region(int level, const Index3& cell) const;

  /// Whether the level-l cell lies in Omega^(l+1) (false for l = L).
  bool refined(int level, const Index3& cell) const;

  /// Active cell: in Omega^l but not in Omega^(l+1).
  bool active(const LevelCell& c) const { return in_region(c.level, c.cell) && !refined(c.level, c.cell); }

  /// Active cells of all levels, ordered by level then x-fastest index.
  std::vector<LevelCell> active_cells() const;
  std::size_t active_count() const;

  /// Active cell containing the point. Points on a shared face go to the cell
  /// on the upper side, except on the box end.
  LevelCell locate(const Vec3& x) const;

  /// Active cells covering `c` (c itself if active).
  std::vector<LevelCell> active_descendants(const LevelCell& c) const;

  /// Extend Omega^(l+1) by the supports (degree p, clipped to the box) of all
  /// level-l functions whose support contains a marked cell, then close under
  /// coarser levels. Marked cells must be active.
  HierarchicalMesh refine(const std::vector<LevelCell>& marked, int degree) const;

  /// Region mask of Omega^level on the level-(level-1) grid, level >= 1.
  const std::vector<std::uint8_t>& region_mask(int level) const { return regions_.at(level - 1); }

  /// Nestedness of all stored regions.
  bool is_nested() const;

  bool operator==(const HierarchicalMesh& other) const = default;

  void write(std::ostream& os) const;
  static HierarchicalMesh read(std::istream& is);

 private:
  void mark_region(int level, const Index3& coarse_cell);

  int nd_;
  Index3 base_;
  Box box_;
  std::vector<std::vector<std::uint8_t>> regions_;  // regions_[l-1] = Omega^l on grid l-1
};

/// Index of the level-(l-1) parent of a level-l cell.
inline Index3 parent_cell(const Index3& c, int nd) {
  Index3 p = c;
  for (int d = 0; d < nd; ++d) p[d] = c[d] / 2;
  return p;
}

}  // namespace topoiga
