#pragma once

#include <vector>

#include "core/types.hpp"

namespace topoiga {

struct QuadPoint {
  Vec3 x{0.0, 0.0, 0.0};
  double w = 0.0;
};

/// Integration order per bisection level. Order k uses k + 1 Gauss points per
/// direction; order 0 is the one-point (centroid) rule.
///
/// Orders decay linearly from k_max at level 1 to 0 at rho_max:
/// k(rho) = round(k_max (rho_max - rho) / (rho_max - 1)). Untrimmed background
/// cells (level 0) use k_max.
struct QuadratureSchedule {
  int k_max = 3;
  int rho_max = 3;
  double decay = 1.0;  // scales all cut-cell orders; 0.5 halves them

  int order(int rho) const;
};

/// Tensor Gauss rule with `order + 1` points per axis on the first nd axes.
void box_rule(int nd, const Box& box, int order, std::vector<QuadPoint>& out);

/// Collapsed (Duffy) Gauss rule on a triangle (nd = 2) or tetrahedron (nd = 3).
/// Order 0 places a single point at the centroid. Points are appended to `out`.
void simplex_rule(int nd, const Vec3* vertices, int order, std::vector<QuadPoint>& out);

/// Rule on a boundary facet: a segment in 2D or a triangle in 3D, weights are
/// lengths / areas.
void facet_rule(int nd, const Vec3* vertices, int order, std::vector<QuadPoint>& out);

/// Signed measure of a simplex (area in 2D, volume in 3D).
double simplex_measure(int nd, const Vec3* vertices);

/// Length of a segment (2D) or area of a triangle (3D).
double facet_measure(int nd, const Vec3* vertices);

}  // namespace topoiga
