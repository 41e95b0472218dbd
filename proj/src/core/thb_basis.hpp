#pragma once

#include <memory>
#include <vector>

#include "core/hierarchical_mesh.hpp"
#include "core/spline_kernel.hpp"

namespace topoiga {

/// Level-0 mesh whose cells are the voxels of the grid.
HierarchicalMesh base_mesh(const VoxelGrid& grid);

struct THBFunction {
  int level = 0;
  Index3 index{0, 0, 0};
};

/// Truncated hierarchical B-spline basis on a HierarchicalMesh.
///
/// Level-l B-splines with support inside Omega^l and not inside Omega^(l+1)
/// are selected. Truncation is stored element-wise: on every active cell of
/// level k each basis function overlapping the cell is a combination of the
/// (p+1)^nd level-k B-splines living on that cell.
class THBBasis {
 public:
  THBBasis(HierarchicalMesh mesh, int degree);

  struct Element {
    LevelCell cell;
    std::vector<std::size_t> functions;  // ascending global ids
    std::vector<double> coeffs;          // functions.size() x local_count, row-major
  };

  const HierarchicalMesh& mesh() const { return mesh_; }
  int degree() const { return p_; }
  int dim() const { return mesh_.dim(); }
  std::size_t size() const { return functions_.size(); }
  int local_count() const { return local_; }
  const THBFunction& function(std::size_t i) const { return functions_[i]; }
  const UniformBSplineBasis& level_basis(int level) const { return levels_[level]; }

  const std::vector<Element>& elements() const { return elements_; }
  std::size_t element_index(const LevelCell& c) const;
  std::size_t locate(const Vec3& x) const { return element_index(mesh_.locate(x)); }

  /// Values (and optionally gradients) of the basis functions of element e at x.
  void evaluate_in_element(std::size_t e, const Vec3& x, std::vector<double>& values,
                           std::vector<Vec3>* gradients = nullptr) const;

  /// Indices and values of the functions non-zero on the element containing x.
  void evaluate(const Vec3& x, std::vector<std::size_t>& index, std::vector<double>& values,
                std::vector<Vec3>* gradients = nullptr) const;

  /// Coefficients of function i in the level-k B-spline basis after truncation
  /// up to level k (dense over the level-k function grid), k >= level of i.
  std::vector<double> truncated_coefficients(std::size_t i, int k) const;

 private:
  struct Block {
    Index3 lo{0, 0, 0};
    Index3 n{1, 1, 1};
    std::vector<double> v;
    double& at(const Index3& i) { return v[linear_index({i[0] - lo[0], i[1] - lo[1], i[2] - lo[2]}, n)]; }
    double get(const Index3& i) const;
  };
  Block refine_block(const Block& b, int level) const;
  void truncate_block(Block& b, int level) const;
  bool support_inside_region(int level, const Index3& f) const;

  HierarchicalMesh mesh_;
  int p_;
  int local_;
  std::vector<UniformBSplineBasis> levels_;
  // refinement_[l][d][j]: non-zero (fine index, value) pairs of coarse function j.
  std::vector<std::array<std::vector<std::vector<std::pair<int, double>>>, 3>> refinement_;
  std::vector<THBFunction> functions_;
  std::vector<Element> elements_;
  std::vector<std::vector<int>> element_of_;  // per level, linear cell -> element or -1
};

/// Smooth level set f(x) = sum_i T_i(x) a_i on a THB basis.
class LevelSetField {
 public:
  LevelSetField(std::shared_ptr<const THBBasis> basis, ConvolutionCoefficients coeffs);

  const THBBasis& basis() const { return *basis_; }
  std::shared_ptr<const THBBasis> basis_ptr() const { return basis_; }
  const ConvolutionCoefficients& coefficients() const { return coeffs_; }
  int dim() const { return basis_->dim(); }
  const Box& box() const { return basis_->mesh().box(); }

  double operator()(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  std::vector<double> evaluate(const std::vector<Vec3>& points) const;

 private:
  std::shared_ptr<const THBBasis> basis_;
  ConvolutionCoefficients coeffs_;
};

/// a_i = int T_i g / int T_i with quadrature split at voxel boundaries.
ConvolutionCoefficients convolve_thb(const VoxelGrid& grid, const THBBasis& basis);

/// Convenience: build the THB basis on `mesh` and convolve the grid.
LevelSetField smooth_level_set(const VoxelGrid& grid, const HierarchicalMesh& mesh, int degree);

}  // namespace topoiga
