#pragma once

#include <vector>

#include "core/bspline.hpp"
#include "core/voxel_image.hpp"

namespace topoiga {

/// Per-axis derivative tables of the (p+1)^nd B-splines living on one cell.
///
/// Local function j enumerates the tensor product with the x offset fastest.
class CellBasisValues {
 public:
  CellBasisValues() = default;
  CellBasisValues(int nd, int degree, int derivatives);

  /// Fill axis d with the derivatives of BSpline1D `axis` in `cell` at x.
  void fill_axis(int d, const BSpline1D& axis, int cell, double x);

  int local_count() const { return count_; }
  int dim() const { return nd_; }

  /// D^alpha of local function j.
  double derivative(int j, const Index3& alpha) const;
  double value(int j) const { return derivative(j, Index3{0, 0, 0}); }
  Vec3 gradient(int j) const;

  /// Per-axis offsets of local function j.
  Index3 offsets(int j) const;

 private:
  int nd_ = 0;
  int p_ = 0;
  int derivs_ = 0;
  int count_ = 0;
  std::array<std::vector<double>, 3> table_;
};

/// Tensor-product open uniform B-spline basis on a box.
class UniformBSplineBasis {
 public:
  UniformBSplineBasis(int nd, int degree, Index3 cells, Box box);

  /// Basis on the image box with h = spacing / 2^level per axis.
  static UniformBSplineBasis on_grid(const VoxelGrid& grid, int degree, int level = 0);

  int dim() const { return nd_; }
  int degree() const { return p_; }
  const Index3& cells() const { return cells_; }
  const Box& box() const { return box_; }
  const BSpline1D& axis(int d) const { return axes_[d]; }
  Index3 function_dims() const;
  std::size_t size() const { return product(function_dims()); }
  double cell_size(int d) const { return axes_[d].cell_size(); }

  Index3 cell_of(const Vec3& x) const;
  Box cell_box(const Index3& cell) const;
  bool contains(const Vec3& x, double tol = 1e-12) const;

  /// Global index of local function j on `cell`.
  std::size_t global_index(const Index3& cell, int j) const;

  void evaluate_cell(const Index3& cell, const Vec3& x, CellBasisValues& out) const;

  /// Indices and values of the non-zero functions at x.
  void evaluate(const Vec3& x, std::vector<std::size_t>& index, std::vector<double>& value) const;

 private:
  int nd_;
  int p_;
  Index3 cells_;
  Box box_;
  std::vector<BSpline1D> axes_;
};

/// Control point level set values a_i = int N_i g / int N_i and V_i = int N_i.
struct ConvolutionCoefficients {
  std::vector<double> a;
  std::vector<double> volumes;
};

/// Visit Gauss points of `cell` after splitting it at voxel boundaries, so that
/// the grayscale value is constant on every sub-box. Points per axis: `points`.
template <class Fn>
void for_each_voxel_quadrature_point(const VoxelGrid& grid, const Box& cell, int points, Fn&& fn);

ConvolutionCoefficients convolve(const VoxelGrid& grid, const UniformBSplineBasis& basis);

/// f(x) = sum_i N_i(x) a_i at each point.
std::vector<double> evaluate_field(const ConvolutionCoefficients& coeffs, const UniformBSplineBasis& basis,
                                   const std::vector<Vec3>& points);

// ---------------------------------------------------------------------------
// One-dimensional filtering analysis.

/// Width of the Gaussian approximating the B-spline smoothing kernel.
double gaussian_kernel_width(double h, int degree);

/// Normalized Gaussian kernel of width sigma.
double gaussian_kernel(double x, double sigma);

/// Fourier transform of the Gaussian kernel, exp(-2 pi^2 xi^2 sigma^2).
double frequency_response(double xi, double sigma);

/// m-term partial sum of the smoothed unit box feature of relative width
/// `ell_hat` in mesh-size units, evaluated at x_hat (mesh-size units).
double smoothed_feature(double x_hat, double ell_hat, int degree, int terms);

/// Peak value of the one-term smoothed feature. With `drop_exponential` the
/// exponential factor is approximated by one (linear law in ell_hat).
double smoothed_feature_peak(double ell_hat, int degree, bool drop_exponential);

/// Integration kernel K(x, y) = sum_i N_i(x) N_i(y) / V_i of a 1D basis.
class SplineKernel1D {
 public:
  explicit SplineKernel1D(BSpline1D basis);
  double operator()(double x, double y) const;
  const BSpline1D& basis() const { return basis_; }
  const std::vector<double>& volumes() const { return volumes_; }

 private:
  BSpline1D basis_;
  std::vector<double> volumes_;
};

/// Basis of degree p and mesh size h on a centred domain [-length/2, length/2].
BSpline1D centred_basis(int degree, double h, double length);

struct KernelProfile {
  std::vector<double> x;
  std::vector<double> exact;
  std::vector<double> gaussian;
};

/// Exact kernel K(x, 0) and its Gaussian approximation sampled on the domain.
KernelProfile kernel_profile(int degree, double h, double length = 10.0, int samples = 2001);

/// Sup-norm distance between K(., y) and the Gaussian centred at y.
double kernel_error_at(const SplineKernel1D& kernel, double y, double sigma, int samples = 4001);

/// Worst sup-norm distance between the exact kernel and its Gaussian
/// approximation over `centres` evaluation centres y spread across one cell
/// at the domain middle. The exact kernel is not shift invariant: at y on a
/// knot the error is not monotone in p, the worst case over y is.
double kernel_vs_gaussian_error(int degree, double h, double length = 10.0, int samples = 4001,
                                int centres = 16);

/// Gaussian width fitted to K(., 0) by least squares of log K against
/// -x^2 / (2 sigma^2) (with intercept) over |x| <= 2 sigma.
double fitted_kernel_width(int degree, double h, double length = 10.0, int samples = 4001);

/// Numerical convolution of a 1D piecewise-constant profile (voxel size
/// `spacing`, starting at `origin`) with `basis`; returns the coefficients.
ConvolutionCoefficients convolve_1d(const std::vector<double>& values, double origin, double spacing,
                                    const BSpline1D& basis);

double evaluate_1d(const ConvolutionCoefficients& coeffs, const BSpline1D& basis, double x);

// ---------------------------------------------------------------------------

template <class Fn>
void for_each_voxel_quadrature_point(const VoxelGrid& grid, const Box& cell, int points, Fn&& fn) {
  const int nd = grid.dim();
  const auto& rule = gauss_legendre(points);
  std::array<std::vector<double>, 3> breaks;
  for (int d = 0; d < 3; ++d) {
    if (d >= nd) {
      breaks[d] = {0.0, 0.0};
      continue;
    }
    const double a = cell.lo[d], b = cell.hi[d];
    const double o = grid.origin()[d], s = grid.spacing()[d];
    const double eps = 1e-12 * (b - a);
    breaks[d].push_back(a);
    const double ta = (a - o) / s, tb = (b - o) / s;
    for (double t = std::floor(ta) + 1.0; t < tb; t += 1.0) {
      const double x = o + t * s;
      if (x > a + eps && x < b - eps) breaks[d].push_back(x);
    }
    breaks[d].push_back(b);
  }
  const int nz = nd > 2 ? static_cast<int>(breaks[2].size()) - 1 : 1;
  const int ny = nd > 1 ? static_cast<int>(breaks[1].size()) - 1 : 1;
  const int nx = static_cast<int>(breaks[0].size()) - 1;
  const int qz = nd > 2 ? points : 1, qy = nd > 1 ? points : 1;
  for (int sz = 0; sz < nz; ++sz)
    for (int sy = 0; sy < ny; ++sy)
      for (int sx = 0; sx < nx; ++sx) {
        const Vec3 lo{breaks[0][sx], breaks[1][sy], breaks[2][sz]};
        const Vec3 hi{breaks[0][sx + 1], breaks[1][sy + 1], breaks[2][sz + 1]};
        const double g = grid(grid.voxel_of(0.5 * (lo + hi)));
        for (int kz = 0; kz < qz; ++kz)
          for (int ky = 0; ky < qy; ++ky)
            for (int kx = 0; kx < points; ++kx) {
              Vec3 x{lo[0] + rule.nodes[kx] * (hi[0] - lo[0]), 0.0, 0.0};
              double w = rule.weights[kx] * (hi[0] - lo[0]);
              if (nd > 1) {
                x[1] = lo[1] + rule.nodes[ky] * (hi[1] - lo[1]);
                w *= rule.weights[ky] * (hi[1] - lo[1]);
              }
              if (nd > 2) {
                x[2] = lo[2] + rule.nodes[kz] * (hi[2] - lo[2]);
                w *= rule.weights[kz] * (hi[2] - lo[2]);
              }
              fn(x, w, g);
            }
      }
}

}  // namespace topoiga
