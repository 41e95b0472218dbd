#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "core/spline_kernel.hpp"
#include "core/tessellation.hpp"

namespace topoiga {

/// Interior face between two active background cells. `axis` is the face
/// normal direction; `lo` is the cell on the lower side.
struct MeshFace {
  Index3 lo{0, 0, 0};
  Index3 hi{0, 0, 0};
  int axis = 0;
  bool ghost = false;  // at least one neighbouring cell is cut
};

/// Uniform B-spline space on the background mesh, restricted to the active
/// cells of a tessellated 2D domain, with its face sets and quadrature.
class BackgroundDiscretization {
 public:
  BackgroundDiscretization(const TessellatedDomain& domain, int degree, const QuadratureSchedule& schedule);

  const TessellatedDomain& domain() const { return domain_; }
  const UniformBSplineBasis& basis() const { return basis_; }
  const DomainQuadrature& quadrature() const { return quad_; }
  const std::vector<MeshFace>& skeleton_faces() const { return faces_; }
  std::size_t ghost_face_count() const;
  int degree() const { return basis_.degree(); }
  double h() const;

  /// Active index of a basis function, or -1.
  int active_index(std::size_t function) const { return active_[function]; }
  std::size_t active_count() const { return active_functions_.size(); }
  const std::vector<std::size_t>& active_functions() const { return active_functions_; }

  /// Greville point of a basis function.
  Vec3 greville(std::size_t function) const;

 private:
  TessellatedDomain domain_;
  UniformBSplineBasis basis_;
  DomainQuadrature quad_;
  std::vector<MeshFace> faces_;
  std::vector<int> active_;
  std::vector<std::size_t> active_functions_;
};

// ---------------------------------------------------------------------------
// Linear elasticity

/// Strong condition on the basis functions that are non-zero on the exterior
/// facets of one box side; `value` gives the prescribed displacement.
struct DirichletSide {
  int side = 0;
  bool fix_x = true;
  bool fix_y = true;
  std::function<Vec3(const Vec3&)> value;
};

struct ElasticityProblem {
  double lambda = 0.5;
  double mu = 0.5;
  double u_bar = 0.2;
  std::vector<DirichletSide> dirichlet;  // empty: clamped bottom, displaced top, rollers on the sides
  bool ghost_penalty = false;
  double ghost_gamma = 0.0005;

  /// Default boundary conditions: u = 0 at the bottom, u = u_bar n at the top,
  /// u . n = 0 on the left and right sides.
  std::vector<DirichletSide> effective_dirichlet() const;
};

struct LinearSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

struct ElasticitySolution {
  std::vector<double> ux, uy;  // per basis function (zero if inactive)
  std::size_t dofs = 0;
  std::size_t constrained = 0;
  double relative_residual = 0.0;
};

/// Stiffness matrix on all active dofs (two per active function, interleaved)
/// without boundary conditions.
LinearSystem assemble_elasticity(const BackgroundDiscretization& disc, const ElasticityProblem& problem);

/// Dof -> prescribed value for the strongly imposed sides.
std::vector<std::pair<int, double>> elasticity_constraints(const BackgroundDiscretization& disc,
                                                           const ElasticityProblem& problem);

ElasticitySolution solve_elasticity(const BackgroundDiscretization& disc, const ElasticityProblem& problem);

Vec3 displacement(const BackgroundDiscretization& disc, const ElasticitySolution& sol, const Vec3& x);

/// (sigma_11, sigma_22, sigma_12) at x.
Vec3 stress(const BackgroundDiscretization& disc, const ElasticitySolution& sol, const ElasticityProblem& problem,
            const Vec3& x);

/// Q = (L / u_bar) (1 / V_img) int_Omega sigma_22 dV with L the box height and
/// V_img the box volume.
double effective_modulus(const BackgroundDiscretization& disc, const ElasticitySolution& sol,
                         const ElasticityProblem& problem);

// ---------------------------------------------------------------------------
// Stokes flow

enum class SideKind { none, wall, inflow, outflow };

struct StokesProblem {
  double mu = 1.0;
  double p_bar = 1.0;
  double beta = 100.0;
  double gamma = 0.05;          // skeleton (pressure) penalty
  double gamma_ghost = 0.0005;  // ghost (velocity) penalty
  bool skeleton = true;
  bool ghost = true;
  bool nitsche_pressure = true;  // pressure terms of the Nitsche traction
  std::array<SideKind, 4> sides{SideKind::none, SideKind::none, SideKind::inflow, SideKind::outflow};
};

struct StokesSolution {
  std::vector<double> ux, uy, p;  // per basis function
  std::size_t dofs = 0;
  double relative_residual = 0.0;
};

/// Saddle-point system on three interleaved fields (u_x, u_y, p) per active
/// function.
LinearSystem assemble_stokes(const BackgroundDiscretization& disc, const StokesProblem& problem);

StokesSolution solve_stokes(const BackgroundDiscretization& disc, const StokesProblem& problem);

Vec3 velocity(const BackgroundDiscretization& disc, const StokesSolution& sol, const Vec3& x);
double pressure(const BackgroundDiscretization& disc, const StokesSolution& sol, const Vec3& x);

/// Outflow through the exterior facets of `side` whose midpoints lie within
/// [lo, hi] along the tangential coordinate.
double outflow_flux(const BackgroundDiscretization& disc, const StokesSolution& sol, int side,
                    double lo = -1e300, double hi = 1e300);

/// Ghost and skeleton penalty energies of given fields (per basis function).
double ghost_energy(const BackgroundDiscretization& disc, const std::vector<double>& u, int k);

/// Condition number estimate of a system matrix (dense SVD; small systems only).
double condition_number(const Eigen::SparseMatrix<double>& m);

}  // namespace topoiga
