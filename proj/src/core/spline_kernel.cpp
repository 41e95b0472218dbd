#include "core/spline_kernel.hpp"

#include <algorithm>
#include <numbers>

namespace topoiga {

CellBasisValues::CellBasisValues(int nd, int degree, int derivatives)
    : nd_(nd), p_(degree), derivs_(derivatives) {
  count_ = 1;
  for (int d = 0; d < nd_; ++d) count_ *= p_ + 1;
  for (int d = 0; d < 3; ++d) table_[d].assign((derivs_ + 1) * (p_ + 1), d < nd_ ? 0.0 : 1.0);
  // Unused axes behave as a single constant function with zero derivatives.
  for (int d = nd_; d < 3; ++d)
    for (int k = 1; k <= derivs_; ++k)
      for (int j = 0; j <= p_; ++j) table_[d][k * (p_ + 1) + j] = 0.0;
}

void CellBasisValues::fill_axis(int d, const BSpline1D& axis, int cell, double x) {
  axis.evaluate(cell, x, derivs_, table_[d]);
}

Index3 CellBasisValues::offsets(int j) const {
  Index3 o{0, 0, 0};
  for (int d = 0; d < nd_; ++d) {
    o[d] = j % (p_ + 1);
    j /= p_ + 1;
  }
  return o;
}

double CellBasisValues::derivative(int j, const Index3& alpha) const {
  const Index3 o = offsets(j);
  double v = 1.0;
  for (int d = 0; d < nd_; ++d) {
    if (alpha[d] > derivs_) throw Error("derivative order not tabulated");
    v *= table_[d][alpha[d] * (p_ + 1) + o[d]];
  }
  return v;
}

Vec3 CellBasisValues::gradient(int j) const {
  Vec3 g{0.0, 0.0, 0.0};
  for (int d = 0; d < nd_; ++d) {
    Index3 alpha{0, 0, 0};
    alpha[d] = 1;
    g[d] = derivative(j, alpha);
  }
  return g;
}

UniformBSplineBasis::UniformBSplineBasis(int nd, int degree, Index3 cells, Box box)
    : nd_(nd), p_(degree), cells_(cells), box_(box) {
  if (p_ < 1) throw Error("spline degree must be at least 1");
  if (nd_ < 1 || nd_ > 3) throw DimensionError("basis dimension must be 1, 2 or 3");
  for (int d = 0; d < 3; ++d) {
    if (d < nd_) {
      if (cells_[d] < 1) throw DimensionError("basis needs at least one cell per axis");
      if (!(box_.length(d) > 0.0)) throw DimensionError("basis box must have positive extent");
      axes_.emplace_back(p_, cells_[d], box_.lo[d], box_.length(d) / cells_[d]);
    } else {
      cells_[d] = 1;
    }
  }
}

UniformBSplineBasis UniformBSplineBasis::on_grid(const VoxelGrid& grid, int degree, int level) {
  Index3 cells{1, 1, 1};
  for (int d = 0; d < grid.dim(); ++d) cells[d] = grid.dims()[d] << level;
  return UniformBSplineBasis(grid.dim(), degree, cells, grid.box());
}

Index3 UniformBSplineBasis::function_dims() const {
  Index3 n{1, 1, 1};
  for (int d = 0; d < nd_; ++d) n[d] = axes_[d].size();
  return n;
}

Index3 UniformBSplineBasis::cell_of(const Vec3& x) const {
  Index3 c{0, 0, 0};
  for (int d = 0; d < nd_; ++d) c[d] = axes_[d].cell_of(x[d]);
  return c;
}

Box UniformBSplineBasis::cell_box(const Index3& cell) const {
  Box b;
  for (int d = 0; d < nd_; ++d) {
    b.lo[d] = axes_[d].origin() + cell[d] * axes_[d].cell_size();
    b.hi[d] = b.lo[d] + axes_[d].cell_size();
  }
  return b;
}

bool UniformBSplineBasis::contains(const Vec3& x, double tol) const {
  for (int d = 0; d < nd_; ++d) {
    const double t = tol * box_.length(d);
    if (x[d] < box_.lo[d] - t || x[d] > box_.hi[d] + t) return false;
  }
  return true;
}

std::size_t UniformBSplineBasis::global_index(const Index3& cell, int j) const {
  Index3 f{0, 0, 0};
  for (int d = 0; d < nd_; ++d) {
    f[d] = cell[d] + j % (p_ + 1);
    j /= p_ + 1;
  }
  return linear_index(f, function_dims());
}

void UniformBSplineBasis::evaluate_cell(const Index3& cell, const Vec3& x, CellBasisValues& out) const {
  for (int d = 0; d < nd_; ++d) out.fill_axis(d, axes_[d], cell[d], x[d]);
}

void UniformBSplineBasis::evaluate(const Vec3& x, std::vector<std::size_t>& index,
                                   std::vector<double>& value) const {
  const Index3 cell = cell_of(x);
  CellBasisValues vals(nd_, p_, 0);
  evaluate_cell(cell, x, vals);
  index.resize(vals.local_count());
  value.resize(vals.local_count());
  for (int j = 0; j < vals.local_count(); ++j) {
    index[j] = global_index(cell, j);
    value[j] = vals.value(j);
  }
}

static void check_same_box(const VoxelGrid& grid, const Box& box, int nd) {
  if (grid.dim() != nd) throw DimensionError("basis and image dimensions differ");
  const Box gb = grid.box();
  for (int d = 0; d < nd; ++d) {
    const double tol = 1e-9 * gb.length(d);
    if (std::abs(gb.lo[d] - box.lo[d]) > tol || std::abs(gb.hi[d] - box.hi[d]) > tol)
      throw DimensionError("basis domain does not coincide with the image box");
  }
}

ConvolutionCoefficients convolve(const VoxelGrid& grid, const UniformBSplineBasis& basis) {
  check_same_box(grid, basis.box(), basis.dim());
  const int nd = basis.dim();
  ConvolutionCoefficients c;
  c.a.assign(basis.size(), 0.0);
  c.volumes.assign(basis.size(), 0.0);
  CellBasisValues vals(nd, basis.degree(), 0);
  for_each_index(nd, Index3{0, 0, 0}, basis.cells(), [&](const Index3& cell) {
    for_each_voxel_quadrature_point(grid, basis.cell_box(cell), basis.degree() + 1,
                                    [&](const Vec3& x, double w, double g) {
                                      basis.evaluate_cell(cell, x, vals);
                                      for (int j = 0; j < vals.local_count(); ++j) {
                                        const std::size_t i = basis.global_index(cell, j);
                                        const double n = vals.value(j) * w;
                                        c.volumes[i] += n;
                                        c.a[i] += n * g;
                                      }
                                    });
  });
  for (std::size_t i = 0; i < c.a.size(); ++i) c.a[i] /= c.volumes[i];
  return c;
}

std::vector<double> evaluate_field(const ConvolutionCoefficients& coeffs, const UniformBSplineBasis& basis,
                                   const std::vector<Vec3>& points) {
  if (coeffs.a.size() != basis.size()) throw DimensionError("coefficient count does not match basis");
  for (const Vec3& x : points)
    if (!basis.contains(x)) throw DimensionError("evaluation point outside the spline domain");
  std::vector<double> f(points.size(), 0.0);
  std::vector<std::size_t> idx;
  std::vector<double> val;
  for (std::size_t k = 0; k < points.size(); ++k) {
    basis.evaluate(points[k], idx, val);
    double s = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) s += val[j] * coeffs.a[idx[j]];
    f[k] = s;
  }
  return f;
}

double gaussian_kernel_width(double h, int degree) { return h * std::sqrt((degree + 1) / 6.0); }

double gaussian_kernel(double x, double sigma) {
  return std::exp(-x * x / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double frequency_response(double xi, double sigma) {
  return std::exp(-2.0 * std::numbers::pi * std::numbers::pi * xi * xi * sigma * sigma);
}

double smoothed_feature(double x_hat, double ell_hat, int degree, int terms) {
  if (terms < 1) throw Error("smoothed feature needs at least one term");
  const double s = std::sqrt((degree + 1) / 6.0);
  double sum = 0.0;
  for (int n = 1; n <= terms; ++n) {
    const double mu = (2.0 * n - 1.0) * ell_hat / (4.0 * terms);
    sum += std::exp(-(x_hat - mu) * (x_hat - mu) / (2.0 * s * s)) +
           std::exp(-(x_hat + mu) * (x_hat + mu) / (2.0 * s * s));
  }
  return ell_hat / (s * std::sqrt(2.0 * std::numbers::pi)) * sum / (2.0 * terms);
}

double smoothed_feature_peak(double ell_hat, int degree, bool drop_exponential) {
  const double linear = ell_hat * std::sqrt(3.0 / (std::numbers::pi * (degree + 1)));
  if (drop_exponential) return linear;
  return linear * std::exp(-3.0 * ell_hat * ell_hat / (16.0 * (degree + 1)));
}

SplineKernel1D::SplineKernel1D(BSpline1D basis) : basis_(std::move(basis)) {
  const int p = basis_.degree();
  volumes_.assign(basis_.size(), 0.0);
  const auto& rule = gauss_legendre(p + 1);
  std::vector<double> v(p + 1);
  for (int c = 0; c < basis_.cells(); ++c) {
    const double a = basis_.origin() + c * basis_.cell_size();
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      basis_.evaluate(c, a + rule.nodes[q] * basis_.cell_size(), 0, v);
      for (int j = 0; j <= p; ++j) volumes_[c + j] += v[j] * rule.weights[q] * basis_.cell_size();
    }
  }
}

double SplineKernel1D::operator()(double x, double y) const {
  const int p = basis_.degree();
  std::vector<double> vx(p + 1), vy(p + 1);
  const int cx = basis_.cell_of(x), cy = basis_.cell_of(y);
  if (std::abs(cx - cy) > p) return 0.0;
  basis_.evaluate(cx, x, 0, vx);
  basis_.evaluate(cy, y, 0, vy);
  double k = 0.0;
  for (int i = 0; i <= p; ++i) {
    const int j = cx + i - cy;
    if (j >= 0 && j <= p) k += vx[i] * vy[j] / volumes_[cx + i];
  }
  return k;
}

BSpline1D centred_basis(int degree, double h, double length) {
  const int cells = static_cast<int>(std::lround(length / h));
  if (cells < 1) throw Error("kernel domain shorter than one cell");
  return BSpline1D(degree, cells, -0.5 * cells * h, h);
}

KernelProfile kernel_profile(int degree, double h, double length, int samples) {
  const SplineKernel1D kernel(centred_basis(degree, h, length));
  const double sigma = gaussian_kernel_width(h, degree);
  const double lo = kernel.basis().origin(), hi = kernel.basis().end();
  KernelProfile prof;
  for (int k = 0; k < samples; ++k) {
    const double x = lo + (hi - lo) * k / (samples - 1);
    prof.x.push_back(x);
    prof.exact.push_back(kernel(x, 0.0));
    prof.gaussian.push_back(gaussian_kernel(x, sigma));
  }
  return prof;
}

double kernel_error_at(const SplineKernel1D& kernel, double y, double sigma, int samples) {
  const double lo = kernel.basis().origin(), hi = kernel.basis().end();
  double e = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = lo + (hi - lo) * k / (samples - 1);
    e = std::max(e, std::abs(kernel(x, y) - gaussian_kernel(x - y, sigma)));
  }
  return e;
}

double kernel_vs_gaussian_error(int degree, double h, double length, int samples, int centres) {
  const SplineKernel1D kernel(centred_basis(degree, h, length));
  const double sigma = gaussian_kernel_width(h, degree);
  const double y0 = kernel.basis().origin() + kernel.basis().cells() / 2 * h;
  double e = 0.0;
  for (int m = 0; m < centres; ++m) e = std::max(e, kernel_error_at(kernel, y0 + h * m / centres, sigma, samples));
  return e;
}

double fitted_kernel_width(int degree, double h, double length, int samples) {
  const KernelProfile prof = kernel_profile(degree, h, length, samples);
  const double window = 2.0 * gaussian_kernel_width(h, degree);
  // Linear regression of log K on t = x^2.
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t k = 0; k < prof.x.size(); ++k) {
    if (std::abs(prof.x[k]) > window || prof.exact[k] <= 0.0) continue;
    const double t = prof.x[k] * prof.x[k], y = std::log(prof.exact[k]);
    n += 1;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  if (!(slope < 0.0)) throw NumericalError("kernel profile is not decaying");
  return std::sqrt(-1.0 / (2.0 * slope));
}

ConvolutionCoefficients convolve_1d(const std::vector<double>& values, double origin, double spacing,
                                    const BSpline1D& basis) {
  const int p = basis.degree();
  const auto& rule = gauss_legendre(p + 1);
  ConvolutionCoefficients c;
  c.a.assign(basis.size(), 0.0);
  c.volumes.assign(basis.size(), 0.0);
  std::vector<double> v(p + 1);
  const auto g_at = [&](double x) {
    const long k = static_cast<long>(std::floor((x - origin) / spacing));
    if (k < 0 || k >= static_cast<long>(values.size())) return 0.0;
    return values[k];
  };
  for (int c0 = 0; c0 < basis.cells(); ++c0) {
    const double a = basis.origin() + c0 * basis.cell_size(), b = a + basis.cell_size();
    std::vector<double> brk{a};
    for (double t = std::floor((a - origin) / spacing) + 1.0;; t += 1.0) {
      const double x = origin + t * spacing;
      if (x >= b - 1e-12 * basis.cell_size()) break;
      if (x > a + 1e-12 * basis.cell_size()) brk.push_back(x);
    }
    brk.push_back(b);
    for (std::size_t s = 0; s + 1 < brk.size(); ++s) {
      const double lo = brk[s], hi = brk[s + 1];
      const double g = g_at(0.5 * (lo + hi));
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        basis.evaluate(c0, lo + rule.nodes[q] * (hi - lo), 0, v);
        const double w = rule.weights[q] * (hi - lo);
        for (int j = 0; j <= p; ++j) {
          c.volumes[c0 + j] += v[j] * w;
          c.a[c0 + j] += v[j] * w * g;
        }
      }
    }
  }
  for (std::size_t i = 0; i < c.a.size(); ++i) c.a[i] /= c.volumes[i];
  return c;
}

double evaluate_1d(const ConvolutionCoefficients& coeffs, const BSpline1D& basis, double x) {
  int first = 0;
  const std::vector<double> v = basis.values(x, &first);
  double f = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) f += v[j] * coeffs.a[first + j];
  return f;
}

}  // namespace topoiga
