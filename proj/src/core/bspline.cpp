#include "core/bspline.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace topoiga {

BSpline1D::BSpline1D(int degree, int cells, double origin, double cell_size)
    : p_(degree), cells_(cells), origin_(origin), h_(cell_size) {
  if (p_ < 0) throw Error("B-spline degree must be non-negative");
  if (cells_ < 1) throw Error("B-spline basis needs at least one cell");
  if (!(h_ > 0.0)) throw Error("B-spline cell size must be positive");
  knots_.reserve(cells_ + 1 + 2 * p_);
  for (int k = 0; k < p_; ++k) knots_.push_back(origin_);
  for (int k = 0; k <= cells_; ++k) knots_.push_back(origin_ + k * h_);
  for (int k = 0; k < p_; ++k) knots_.push_back(end());
}

int BSpline1D::cell_of(double x) const {
  const int c = static_cast<int>(std::floor((x - origin_) / h_));
  return std::clamp(c, 0, cells_ - 1);
}

void BSpline1D::evaluate(int cell, double x, int derivatives, std::span<double> out) const {
  // Piegl & Tiller, algorithm A2.3, on knot span s = cell + p.
  const int p = p_;
  const int s = cell + p;
  const auto& U = knots_;
  const int nd = std::min(derivatives, p);
  std::vector<double> left(p + 1), right(p + 1);
  std::vector<double> ndu((p + 1) * (p + 1));
  auto NDU = [&](int i, int j) -> double& { return ndu[i * (p + 1) + j]; };
  NDU(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[s + 1 - j];
    right[j] = U[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      NDU(j, r) = right[r + 1] + left[j - r];
      const double temp = NDU(r, j - 1) / NDU(j, r);
      NDU(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    NDU(j, j) = saved;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (int j = 0; j <= p; ++j) out[j] = NDU(j, p);

  std::vector<double> a(2 * (p + 1));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    std::fill(a.begin(), a.end(), 0.0);
    a[0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2 * (p + 1) + 0] = a[s1 * (p + 1) + 0] / NDU(pk + 1, rk);
        d = a[s2 * (p + 1) + 0] * NDU(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2 * (p + 1) + j] = (a[s1 * (p + 1) + j] - a[s1 * (p + 1) + j - 1]) / NDU(pk + 1, rk + j);
        d += a[s2 * (p + 1) + j] * NDU(rk + j, pk);
      }
      if (r <= pk) {
        a[s2 * (p + 1) + k] = -a[s1 * (p + 1) + k - 1] / NDU(pk + 1, r);
        d += a[s2 * (p + 1) + k] * NDU(r, pk);
      }
      out[k * (p + 1) + r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= p; ++j) out[k * (p + 1) + j] *= factor;
    factor *= (p - k);
  }
}

std::vector<double> BSpline1D::values(double x, int* first_function) const {
  const int c = cell_of(x);
  std::vector<double> v(p_ + 1);
  evaluate(c, x, 0, v);
  if (first_function) *first_function = c;
  return v;
}

double cox_de_boor(const std::vector<double>& knots, int degree, int i, double x) {
  const double last = knots.back();
  if (degree == 0) {
    if (knots[i] <= x && x < knots[i + 1]) return 1.0;
    // Right end point belongs to the last non-empty span.
    if (x == last && knots[i] < knots[i + 1] && knots[i + 1] == last) return 1.0;
    return 0.0;
  }
  double v = 0.0;
  const double d1 = knots[i + degree] - knots[i];
  const double d2 = knots[i + degree + 1] - knots[i + 1];
  if (d1 > 0.0) v += (x - knots[i]) / d1 * cox_de_boor(knots, degree - 1, i, x);
  if (d2 > 0.0) v += (knots[i + degree + 1] - x) / d2 * cox_de_boor(knots, degree - 1, i + 1, x);
  return v;
}

std::vector<double> dyadic_refinement_matrix(const BSpline1D& coarse) {
  // Boehm knot insertion applied to the identity coefficient matrix.
  const int p = coarse.degree();
  const int ncols = coarse.size();
  std::vector<double> U = coarse.knots();
  std::vector<std::vector<double>> C(ncols, std::vector<double>(ncols, 0.0));
  for (int i = 0; i < ncols; ++i) C[i][i] = 1.0;

  for (int c = 0; c < coarse.cells(); ++c) {
    const double t = coarse.origin() + (c + 0.5) * coarse.cell_size();
    int s = p;
    while (s + 1 < static_cast<int>(U.size()) && U[s + 1] <= t) ++s;
    std::vector<std::vector<double>> D(C.size() + 1);
    for (int i = 0; i <= s - p; ++i) D[i] = C[i];
    for (int i = s - p + 1; i <= s; ++i) {
      const double alpha = (t - U[i]) / (U[i + p] - U[i]);
      D[i].resize(ncols);
      for (int j = 0; j < ncols; ++j) D[i][j] = alpha * C[i][j] + (1.0 - alpha) * C[i - 1][j];
    }
    for (std::size_t i = s + 1; i < D.size(); ++i) D[i] = C[i - 1];
    C = std::move(D);
    U.insert(U.begin() + s + 1, t);
  }
  std::vector<double> R(C.size() * ncols);
  for (std::size_t i = 0; i < C.size(); ++i)
    for (int j = 0; j < ncols; ++j) R[i * ncols + j] = C[i][j];
  return R;
}

const GaussRule1D& gauss_legendre(int points) {
  static std::mutex mutex;
  static std::map<int, GaussRule1D> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  if (points < 1) throw Error("Gauss rule needs at least one point");
  GaussRule1D rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int n = points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
  }
  return cache.emplace(points, std::move(rule)).first->second;
}

}  // namespace topoiga
