#include "core/quadrature.hpp"

#include <algorithm>

#include "core/bspline.hpp"

namespace topoiga {

int QuadratureSchedule::order(int rho) const {
  if (rho <= 0) return k_max;
  if (rho >= rho_max) return 0;
  const double k = rho_max > 1 ? k_max * double(rho_max - rho) / double(rho_max - 1) : 0.0;
  return std::max(0, static_cast<int>(std::lround(decay * k)));
}

void box_rule(int nd, const Box& box, int order, std::vector<QuadPoint>& out) {
  const auto& g = gauss_legendre(order + 1);
  const int n = order + 1;
  const int nz = nd > 2 ? n : 1, ny = nd > 1 ? n : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < n; ++i) {
        QuadPoint q;
        const int idx[3] = {i, j, k};
        q.w = 1.0;
        for (int d = 0; d < nd; ++d) {
          q.x[d] = box.lo[d] + g.nodes[idx[d]] * box.length(d);
          q.w *= g.weights[idx[d]] * box.length(d);
        }
        out.push_back(q);
      }
}

double simplex_measure(int nd, const Vec3* v) {
  const Vec3 a = v[1] - v[0], b = v[2] - v[0];
  if (nd == 2) return 0.5 * (a[0] * b[1] - a[1] * b[0]);
  return dot(cross(a, b), v[3] - v[0]) / 6.0;
}

double facet_measure(int nd, const Vec3* v) {
  if (nd == 2) return norm(v[1] - v[0]);
  return 0.5 * norm(cross(v[1] - v[0], v[2] - v[0]));
}

namespace {

// Collapsed rule on the reference simplex with vertices e0 = 0, e1, ..., e_nd
// given as barycentric weights.
void reference_simplex(int nd, int order, std::vector<std::array<double, 4>>& bary, std::vector<double>& w) {
  if (order == 0) {
    bary.push_back({1.0 / (nd + 1), 1.0 / (nd + 1), 1.0 / (nd + 1), nd == 3 ? 0.25 : 0.0});
    w.push_back(nd == 2 ? 0.5 : 1.0 / 6.0);
    return;
  }
  // One extra point along collapsed directions absorbs the Jacobian degree.
  const auto& g = gauss_legendre(order + 1);
  const auto& gc = gauss_legendre(order + 2);
  if (nd == 2) {
    for (std::size_t i = 0; i < gc.nodes.size(); ++i)
      for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        const double u = gc.nodes[i], v = g.nodes[j] * (1.0 - u);
        bary.push_back({1.0 - u - v, u, v, 0.0});
        w.push_back(gc.weights[i] * g.weights[j] * (1.0 - u));
      }
    return;
  }
  const auto& gcc = gauss_legendre(order + 3);
  for (std::size_t i = 0; i < gcc.nodes.size(); ++i)
    for (std::size_t j = 0; j < gc.nodes.size(); ++j)
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double u = gcc.nodes[i];
        const double v = gc.nodes[j] * (1.0 - u);
        const double t = g.nodes[k] * (1.0 - u - v);
        bary.push_back({1.0 - u - v - t, u, v, t});
        w.push_back(gcc.weights[i] * gc.weights[j] * g.weights[k] * (1.0 - u) * (1.0 - u) * (1.0 - gc.nodes[j]));
      }
}

}  // namespace

void simplex_rule(int nd, const Vec3* v, int order, std::vector<QuadPoint>& out) {
  std::vector<std::array<double, 4>> bary;
  std::vector<double> w;
  reference_simplex(nd, order, bary, w);
  const double scale = std::abs(simplex_measure(nd, v)) * (nd == 2 ? 2.0 : 6.0);
  for (std::size_t q = 0; q < w.size(); ++q) {
    QuadPoint p;
    for (int a = 0; a <= nd; ++a) p.x = p.x + bary[q][a] * v[a];
    p.w = w[q] * scale;
    out.push_back(p);
  }
}

void facet_rule(int nd, const Vec3* v, int order, std::vector<QuadPoint>& out) {
  if (nd == 2) {
    const auto& g = gauss_legendre(order + 1);
    const double len = norm(v[1] - v[0]);
    for (std::size_t q = 0; q < g.nodes.size(); ++q)
      out.push_back({v[0] + g.nodes[q] * (v[1] - v[0]), g.weights[q] * len});
    return;
  }
  std::vector<std::array<double, 4>> bary;
  std::vector<double> w;
  reference_simplex(2, order, bary, w);
  const double area = facet_measure(3, v);
  for (std::size_t q = 0; q < w.size(); ++q) {
    QuadPoint p;
    for (int a = 0; a < 3; ++a) p.x = p.x + bary[q][a] * v[a];
    p.w = 2.0 * w[q] * area;
    out.push_back(p);
  }
}

}  // namespace topoiga
