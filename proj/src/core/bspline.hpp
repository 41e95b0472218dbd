#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace topoiga {

/// Open uniform B-spline basis of degree p on [origin, origin + cells * h]
/// with full C^{p-1} regularity. Function i is supported on cells
/// [max(0, i - p), min(cells - 1, i)].
class BSpline1D {
 public:
  BSpline1D(int degree, int cells, double origin, double cell_size);

  int degree() const { return p_; }
  int cells() const { return cells_; }
  int size() const { return cells_ + p_; }
  double origin() const { return origin_; }
  double cell_size() const { return h_; }
  double end() const { return origin_ + cells_ * h_; }
  const std::vector<double>& knots() const { return knots_; }

  /// Cell containing x (the last cell owns the right end point).
  int cell_of(double x) const;

  /// First and last cell of the support of function i.
  int support_first(int i) const { return std::max(0, i - p_); }
  int support_last(int i) const { return std::min(cells_ - 1, i); }

  /// Values and derivatives of the p+1 functions cell, ..., cell+p at x using
  /// the polynomial piece of `cell` (x may lie on the cell boundary or beyond).
  /// out[k * (p+1) + j] is the k-th derivative of function cell + j.
  void evaluate(int cell, double x, int derivatives, std::span<double> out) const;

  /// Convenience: values only, cell located from x.
  std::vector<double> values(double x, int* first_function) const;

 private:
  int p_;
  int cells_;
  double origin_;
  double h_;
  std::vector<double> knots_;
};

/// Direct recursive Cox-de Boor evaluation of function i at x. Slow; used as an
/// independent check of BSpline1D::evaluate.
double cox_de_boor(const std::vector<double>& knots, int degree, int i, double x);

/// Refinement matrix R with N_coarse_j = sum_i R(i, j) N_fine_i, where the
/// fine basis bisects every cell of the coarse one. Returned row-major with
/// fine.size() rows and coarse.size() columns.
std::vector<double> dyadic_refinement_matrix(const BSpline1D& coarse);

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule1D& gauss_legendre(int points);

}  // namespace topoiga
