#include "core/thb_basis.hpp"

#include <algorithm>

namespace topoiga {

HierarchicalMesh base_mesh(const VoxelGrid& grid) { return HierarchicalMesh(grid.dim(), grid.dims(), grid.box()); }

double THBBasis::Block::get(const Index3& i) const {
  for (int d = 0; d < 3; ++d)
    if (i[d] < lo[d] || i[d] >= lo[d] + n[d]) return 0.0;
  return v[linear_index({i[0] - lo[0], i[1] - lo[1], i[2] - lo[2]}, n)];
}

THBBasis::THBBasis(HierarchicalMesh mesh, int degree) : mesh_(std::move(mesh)), p_(degree) {
  if (p_ < 1) throw Error("spline degree must be at least 1");
  const int nd = mesh_.dim();
  const int L = mesh_.max_level();
  local_ = 1;
  for (int d = 0; d < nd; ++d) local_ *= p_ + 1;
  for (int l = 0; l <= L; ++l) levels_.emplace_back(nd, p_, mesh_.level_dims(l), mesh_.box());
  refinement_.resize(L);
  for (int l = 0; l < L; ++l)
    for (int d = 0; d < nd; ++d) {
      const BSpline1D& coarse = levels_[l].axis(d);
      const int nc = coarse.size(), nf = levels_[l + 1].axis(d).size();
      const std::vector<double> R = dyadic_refinement_matrix(coarse);
      auto& cols = refinement_[l][d];
      cols.resize(nc);
      for (int j = 0; j < nc; ++j)
        for (int i = 0; i < nf; ++i)
          if (R[i * nc + j] != 0.0) cols[j].emplace_back(i, R[i * nc + j]);
    }

  // Elements in level order, x fastest.
  element_of_.resize(L + 1);
  for (int l = 0; l <= L; ++l) element_of_[l].assign(product(mesh_.level_dims(l)), -1);
  for (const LevelCell& c : mesh_.active_cells()) {
    element_of_[c.level][linear_index(c.cell, mesh_.level_dims(c.level))] = static_cast<int>(elements_.size());
    elements_.push_back({c, {}, {}});
  }

  auto assign = [&](const Block& b, int k, std::size_t id) {
    const Index3 ncell = mesh_.level_dims(k);
    Index3 lo{0, 0, 0}, hi{1, 1, 1};
    for (int d = 0; d < nd; ++d) {
      lo[d] = std::max(0, b.lo[d] - p_);
      hi[d] = std::min(ncell[d], b.lo[d] + b.n[d]);
    }
    std::vector<double> local(local_);
    for_each_index(nd, lo, hi, [&](const Index3& c) {
      const int e = element_of_[k][linear_index(c, ncell)];
      if (e < 0) return;
      bool any = false;
      for (int j = 0; j < local_; ++j) {
        Index3 f = c;
        int r = j;
        for (int d = 0; d < nd; ++d) {
          f[d] += r % (p_ + 1);
          r /= p_ + 1;
        }
        local[j] = b.get(f);
        any = any || local[j] != 0.0;
      }
      if (!any) return;
      elements_[e].functions.push_back(id);
      elements_[e].coeffs.insert(elements_[e].coeffs.end(), local.begin(), local.end());
    });
  };

  for (int l = 0; l <= L; ++l) {
    const Index3 nf = levels_[l].function_dims();
    for_each_index(nd, Index3{0, 0, 0}, nf, [&](const Index3& f) {
      if (!support_inside_region(l, f)) return;
      if (l < L) {
        // Not selected if the whole support is refined further.
        bool all_refined = true;
        Index3 lo{0, 0, 0}, hi{1, 1, 1};
        for (int d = 0; d < nd; ++d) {
          lo[d] = levels_[l].axis(d).support_first(f[d]);
          hi[d] = levels_[l].axis(d).support_last(f[d]) + 1;
        }
        for_each_index(nd, lo, hi, [&](const Index3& c) { all_refined = all_refined && mesh_.refined(l, c); });
        if (all_refined) return;
      }
      const std::size_t id = functions_.size();
      functions_.push_back({l, f});
      Block b;
      b.lo = f;
      b.v = {1.0};
      assign(b, l, id);
      for (int k = l + 1; k <= L; ++k) {
        b = refine_block(b, k - 1);
        truncate_block(b, k);
        if (std::none_of(b.v.begin(), b.v.end(), [](double v) { return v != 0.0; })) break;
        assign(b, k, id);
      }
    });
  }
}

bool THBBasis::support_inside_region(int level, const Index3& f) const {
  const int nd = mesh_.dim();
  if (level == 0) return true;
  Index3 lo{0, 0, 0}, hi{1, 1, 1};
  for (int d = 0; d < nd; ++d) {
    lo[d] = levels_[level].axis(d).support_first(f[d]);
    hi[d] = levels_[level].axis(d).support_last(f[d]) + 1;
  }
  bool inside = true;
  for_each_index(nd, lo, hi, [&](const Index3& c) { inside = inside && mesh_.in_region(level, c); });
  return inside;
}

THBBasis::Block THBBasis::refine_block(const Block& b, int level) const {
  Block cur = b;
  for (int d = 0; d < mesh_.dim(); ++d) {
    const auto& cols = refinement_[level][d];
    int first = 1 << 30, last = -1;
    for (int j = cur.lo[d]; j < cur.lo[d] + cur.n[d]; ++j) {
      first = std::min(first, cols[j].front().first);
      last = std::max(last, cols[j].back().first);
    }
    Block next;
    next.lo = cur.lo;
    next.n = cur.n;
    next.lo[d] = first;
    next.n[d] = last - first + 1;
    next.v.assign(product(next.n), 0.0);
    Index3 hi{cur.lo[0] + cur.n[0], cur.lo[1] + cur.n[1], cur.lo[2] + cur.n[2]};
    for_each_index(3, cur.lo, hi, [&](const Index3& i) {
      const double c = cur.get(i);
      if (c == 0.0) return;
      for (const auto& [fi, r] : cols[i[d]]) {
        Index3 t = i;
        t[d] = fi;
        next.at(t) += r * c;
      }
    });
    cur = std::move(next);
  }
  return cur;
}

void THBBasis::truncate_block(Block& b, int level) const {
  Index3 hi{b.lo[0] + b.n[0], b.lo[1] + b.n[1], b.lo[2] + b.n[2]};
  for_each_index(mesh_.dim(), b.lo, hi, [&](const Index3& f) {
    if (b.get(f) != 0.0 && support_inside_region(level, f)) b.at(f) = 0.0;
  });
}

std::vector<double> THBBasis::truncated_coefficients(std::size_t i, int k) const {
  const THBFunction& fn = functions_.at(i);
  if (k < fn.level || k > mesh_.max_level()) throw Error("level outside the function's range");
  Block b;
  b.lo = fn.index;
  b.v = {1.0};
  for (int l = fn.level + 1; l <= k; ++l) {
    b = refine_block(b, l - 1);
    truncate_block(b, l);
  }
  const Index3 nf = levels_[k].function_dims();
  std::vector<double> dense(product(nf), 0.0);
  for_each_index(mesh_.dim(), Index3{0, 0, 0}, nf, [&](const Index3& f) { dense[linear_index(f, nf)] = b.get(f); });
  return dense;
}

std::size_t THBBasis::element_index(const LevelCell& c) const {
  const int e = element_of_.at(c.level)[linear_index(c.cell, mesh_.level_dims(c.level))];
  if (e < 0) throw Error("cell is not active");
  return static_cast<std::size_t>(e);
}

void THBBasis::evaluate_in_element(std::size_t e, const Vec3& x, std::vector<double>& values,
                                   std::vector<Vec3>* gradients) const {
  const Element& el = elements_[e];
  const int nd = mesh_.dim();
  CellBasisValues vals(nd, p_, gradients ? 1 : 0);
  levels_[el.cell.level].evaluate_cell(el.cell.cell, x, vals);
  const std::size_t nf = el.functions.size();
  values.assign(nf, 0.0);
  if (gradients) gradients->assign(nf, Vec3{0.0, 0.0, 0.0});
  for (int j = 0; j < local_; ++j) {
    const double v = vals.value(j);
    const Vec3 g = gradients ? vals.gradient(j) : Vec3{};
    for (std::size_t f = 0; f < nf; ++f) {
      const double c = el.coeffs[f * local_ + j];
      if (c == 0.0) continue;
      values[f] += c * v;
      if (gradients)
        for (int d = 0; d < nd; ++d) (*gradients)[f][d] += c * g[d];
    }
  }
}

void THBBasis::evaluate(const Vec3& x, std::vector<std::size_t>& index, std::vector<double>& values,
                        std::vector<Vec3>* gradients) const {
  const std::size_t e = locate(x);
  evaluate_in_element(e, x, values, gradients);
  index = elements_[e].functions;
}

LevelSetField::LevelSetField(std::shared_ptr<const THBBasis> basis, ConvolutionCoefficients coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (coeffs_.a.size() != basis_->size()) throw DimensionError("coefficient count does not match basis");
}

double LevelSetField::operator()(const Vec3& x) const {
  std::vector<std::size_t> idx;
  std::vector<double> val;
  basis_->evaluate(x, idx, val);
  double s = 0.0;
  for (std::size_t j = 0; j < idx.size(); ++j) s += val[j] * coeffs_.a[idx[j]];
  return s;
}

Vec3 LevelSetField::gradient(const Vec3& x) const {
  std::vector<std::size_t> idx;
  std::vector<double> val;
  std::vector<Vec3> grad;
  basis_->evaluate(x, idx, val, &grad);
  Vec3 g{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < idx.size(); ++j) g = g + coeffs_.a[idx[j]] * grad[j];
  return g;
}

std::vector<double> LevelSetField::evaluate(const std::vector<Vec3>& points) const {
  std::vector<double> f(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) f[k] = (*this)(points[k]);
  return f;
}

ConvolutionCoefficients convolve_thb(const VoxelGrid& grid, const THBBasis& basis) {
  const HierarchicalMesh& mesh = basis.mesh();
  if (grid.dim() != mesh.dim()) throw DimensionError("basis and image dimensions differ");
  const Box gb = grid.box();
  for (int d = 0; d < mesh.dim(); ++d) {
    const double tol = 1e-9 * gb.length(d);
    if (std::abs(gb.lo[d] - mesh.box().lo[d]) > tol || std::abs(gb.hi[d] - mesh.box().hi[d]) > tol)
      throw DimensionError("mesh box does not coincide with the image box");
  }
  ConvolutionCoefficients c;
  c.a.assign(basis.size(), 0.0);
  c.volumes.assign(basis.size(), 0.0);
  std::vector<double> values;
  for (std::size_t e = 0; e < basis.elements().size(); ++e) {
    const auto& el = basis.elements()[e];
    for_each_voxel_quadrature_point(grid, mesh.cell_box(el.cell), basis.degree() + 1,
                                    [&](const Vec3& x, double w, double g) {
                                      basis.evaluate_in_element(e, x, values);
                                      for (std::size_t f = 0; f < values.size(); ++f) {
                                        const std::size_t i = el.functions[f];
                                        const double n = values[f] * w;
                                        c.volumes[i] += n;
                                        c.a[i] += n * g;
                                      }
                                    });
  }
  for (std::size_t i = 0; i < c.a.size(); ++i) {
    if (!(c.volumes[i] > 0.0)) throw NumericalError("truncated basis function with non-positive integral");
    c.a[i] /= c.volumes[i];
  }
  return c;
}

LevelSetField smooth_level_set(const VoxelGrid& grid, const HierarchicalMesh& mesh, int degree) {
  auto basis = std::make_shared<const THBBasis>(mesh, degree);
  ConvolutionCoefficients c = convolve_thb(grid, *basis);
  return LevelSetField(std::move(basis), std::move(c));
}

}  // namespace topoiga
