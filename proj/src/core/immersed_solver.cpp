#include "core/immersed_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "core/bspline.hpp"

namespace topoiga {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

constexpr double kSolveTolerance = 1e-10;

void check(const ElasticityProblem& pr) {
  if (!(pr.mu > 0.0) || !(pr.lambda + pr.mu > 0.0)) throw Error("elasticity needs mu > 0 and lambda + mu > 0");
  if (!std::isfinite(pr.u_bar) || pr.u_bar == 0.0) throw Error("u_bar must be finite and non-zero");
  if (pr.ghost_gamma < 0.0) throw Error("ghost penalty must be non-negative");
}

void check(const StokesProblem& pr) {
  if (!(pr.mu > 0.0)) throw Error("viscosity must be positive");
  if (!(pr.beta > 0.0)) throw Error("Nitsche parameter beta must be positive");
  if (pr.gamma < 0.0 || pr.gamma_ghost < 0.0) throw Error("penalty parameters must be non-negative");
  if (!std::isfinite(pr.p_bar)) throw Error("pressure drop must be finite");
}

UniformBSplineBasis analysis_basis(const TessellatedDomain& domain, int degree) {
  if (domain.nd != 2) throw DimensionError("the immersed solvers are two-dimensional");
  return UniformBSplineBasis(2, degree, domain.mesh.cells, domain.mesh.box);
}

// Basis functions of one cell evaluated at a point, with their active ids.
struct LocalBasis {
  CellBasisValues vals;
  std::vector<int> active;
  std::vector<std::size_t> global;

  LocalBasis(const BackgroundDiscretization& disc, int derivs)
      : vals(2, disc.degree(), derivs), active(vals.local_count()), global(vals.local_count()) {}

  void at(const BackgroundDiscretization& disc, const Index3& cell, const Vec3& x) {
    disc.basis().evaluate_cell(cell, x, vals);
    for (int j = 0; j < vals.local_count(); ++j) {
      global[j] = disc.basis().global_index(cell, j);
      active[j] = disc.active_index(global[j]);
    }
  }
};

// Jumps of the k-th normal derivative across one face at one point.
struct FaceJump {
  std::vector<int> active;
  std::vector<std::size_t> global;
  std::vector<double> jump;
};

template <class Fn>
void for_each_face_point(const BackgroundDiscretization& disc, const MeshFace& face, int k, Fn&& fn) {
  const UniformBSplineBasis& basis = disc.basis();
  const int t = 1 - face.axis;
  const Box lo_box = basis.cell_box(face.lo);
  const double xn = basis.cell_box(face.hi).lo[face.axis];
  const auto& g = gauss_legendre(disc.degree() + 1);
  LocalBasis lo(disc, k), hi(disc, k);
  Index3 alpha{0, 0, 0};
  alpha[face.axis] = k;
  FaceJump fj;
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    Vec3 x{0.0, 0.0, 0.0};
    x[face.axis] = xn;
    x[t] = lo_box.lo[t] + g.nodes[q] * lo_box.length(t);
    const double w = g.weights[q] * lo_box.length(t);
    lo.at(disc, face.lo, x);
    hi.at(disc, face.hi, x);
    fj.active.clear();
    fj.global.clear();
    fj.jump.clear();
    auto add = [&](const LocalBasis& b, int j, double s) {
      const double d = s * b.vals.derivative(j, alpha);
      for (std::size_t m = 0; m < fj.global.size(); ++m)
        if (fj.global[m] == b.global[j]) {
          fj.jump[m] += d;
          return;
        }
      fj.global.push_back(b.global[j]);
      fj.active.push_back(b.active[j]);
      fj.jump.push_back(d);
    };
    for (int j = 0; j < lo.vals.local_count(); ++j) add(lo, j, 1.0);
    for (int j = 0; j < hi.vals.local_count(); ++j) add(hi, j, -1.0);
    fn(x, w, fj);
  }
}

// Penalty sum_F scale int [[d_n^k u_c]] [[d_n^k v_c]] on `stride`-interleaved
// components [first, first + ncomp).
void add_face_penalty(const BackgroundDiscretization& disc, bool ghost_only, int k, double scale, int stride,
                      int first, int ncomp, Triplets& trip) {
  for (const MeshFace& f : disc.skeleton_faces()) {
    if (ghost_only && !f.ghost) continue;
    for_each_face_point(disc, f, k, [&](const Vec3&, double w, const FaceJump& fj) {
      for (std::size_t i = 0; i < fj.jump.size(); ++i) {
        if (fj.active[i] < 0 || fj.jump[i] == 0.0) continue;
        for (std::size_t j = 0; j < fj.jump.size(); ++j) {
          if (fj.active[j] < 0 || fj.jump[j] == 0.0) continue;
          const double v = scale * w * fj.jump[i] * fj.jump[j];
          for (int c = first; c < first + ncomp; ++c)
            trip.emplace_back(stride * fj.active[i] + c, stride * fj.active[j] + c, v);
        }
      }
    });
  }
}

double relative_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double r = (a * x - b).norm();
  return nb > 0.0 ? r / nb : r;
}

double eval(const BackgroundDiscretization& disc, const std::vector<double>& coeffs, const Vec3& x,
            int deriv_axis = -1) {
  const UniformBSplineBasis& basis = disc.basis();
  const Index3 cell = basis.cell_of(x);
  CellBasisValues vals(2, disc.degree(), deriv_axis >= 0 ? 1 : 0);
  basis.evaluate_cell(cell, x, vals);
  Index3 alpha{0, 0, 0};
  if (deriv_axis >= 0) alpha[deriv_axis] = 1;
  double s = 0.0;
  for (int j = 0; j < vals.local_count(); ++j) s += coeffs[basis.global_index(cell, j)] * vals.derivative(j, alpha);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

BackgroundDiscretization::BackgroundDiscretization(const TessellatedDomain& domain, int degree,
                                                   const QuadratureSchedule& schedule)
    : domain_(domain), basis_(analysis_basis(domain, degree)), quad_(build_quadrature(domain, schedule)) {
  const Index3 cells = domain_.mesh.cells;
  active_.assign(basis_.size(), -1);
  CellBasisValues vals(2, degree, 0);
  std::vector<char> used(basis_.size(), 0);
  for_each_index(2, {0, 0, 0}, cells, [&](const Index3& c) {
    if (!domain_.active(c)) return;
    for (int j = 0; j < vals.local_count(); ++j) used[basis_.global_index(c, j)] = 1;
    for (int axis = 0; axis < 2; ++axis) {
      Index3 n = c;
      ++n[axis];
      if (n[axis] >= cells[axis] || !domain_.active(n)) continue;
      faces_.push_back({c, n, axis, domain_.cut(c) || domain_.cut(n)});
    }
  });
  for (std::size_t i = 0; i < used.size(); ++i)
    if (used[i]) {
      active_[i] = static_cast<int>(active_functions_.size());
      active_functions_.push_back(i);
    }
}

std::size_t BackgroundDiscretization::ghost_face_count() const {
  return static_cast<std::size_t>(std::count_if(faces_.begin(), faces_.end(), [](const MeshFace& f) { return f.ghost; }));
}

double BackgroundDiscretization::h() const { return std::max(basis_.cell_size(0), basis_.cell_size(1)); }

Vec3 BackgroundDiscretization::greville(std::size_t function) const {
  const Index3 dims = basis_.function_dims();
  const Index3 idx = unravel_index(function, dims);
  Vec3 x{0.0, 0.0, 0.0};
  const int p = degree();
  for (int d = 0; d < 2; ++d) {
    const auto& knots = basis_.axis(d).knots();
    double s = 0.0;
    for (int m = 1; m <= p; ++m) s += knots[idx[d] + m];
    x[d] = s / p;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Elasticity

std::vector<DirichletSide> ElasticityProblem::effective_dirichlet() const {
  if (!dirichlet.empty()) return dirichlet;
  const double ub = u_bar;
  auto zero = [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
  return {
      {2, true, true, zero},
      {3, true, true, [ub](const Vec3&) { return Vec3{0.0, ub, 0.0}; }},
      {0, true, false, zero},
      {1, true, false, zero},
  };
}

LinearSystem assemble_elasticity(const BackgroundDiscretization& disc, const ElasticityProblem& pr) {
  const int n = static_cast<int>(2 * disc.active_count());
  Triplets trip;
  LocalBasis lb(disc, 1);
  for (const CellQuadrature& cq : disc.quadrature().cells) {
    for (const QuadPoint& q : cq.points) {
      lb.at(disc, cq.cell, q.x);
      const int m = lb.vals.local_count();
      for (int i = 0; i < m; ++i) {
        const Vec3 gi = lb.vals.gradient(i);
        for (int j = 0; j < m; ++j) {
          const Vec3 gj = lb.vals.gradient(j);
          const double gg = gi[0] * gj[0] + gi[1] * gj[1];
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              double v = pr.lambda * gi[a] * gj[b] + pr.mu * gi[b] * gj[a];
              if (a == b) v += pr.mu * gg;
              if (v != 0.0) trip.emplace_back(2 * lb.active[i] + a, 2 * lb.active[j] + b, v * q.w);
            }
        }
      }
    }
  }
  if (pr.ghost_penalty) {
    const int k = disc.degree();
    add_face_penalty(disc, true, k, pr.ghost_gamma * pr.mu * std::pow(disc.h(), 2 * k - 1), 2, 0, 2, trip);
  }
  LinearSystem sys;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.rhs = Eigen::VectorXd::Zero(n);
  return sys;
}

std::vector<std::pair<int, double>> elasticity_constraints(const BackgroundDiscretization& disc,
                                                           const ElasticityProblem& pr) {
  std::map<int, double> fixed;
  LocalBasis lb(disc, 0);
  for (const DirichletSide& side : pr.effective_dirichlet()) {
    for (const FacetQuadrature& fq : disc.quadrature().exterior) {
      if (fq.side != side.side) continue;
      for (const QuadPoint& q : fq.points) {
        lb.at(disc, fq.cell, q.x);
        for (int j = 0; j < lb.vals.local_count(); ++j) {
          if (std::abs(lb.vals.value(j)) < 1e-14 || lb.active[j] < 0) continue;
          const Vec3 u = side.value(disc.greville(lb.global[j]));
          if (side.fix_x) fixed.emplace(2 * lb.active[j], u[0]);
          if (side.fix_y) fixed.emplace(2 * lb.active[j] + 1, u[1]);
        }
      }
    }
  }
  return {fixed.begin(), fixed.end()};
}

ElasticitySolution solve_elasticity(const BackgroundDiscretization& disc, const ElasticityProblem& pr) {
  check(pr);
  const LinearSystem sys = assemble_elasticity(disc, pr);
  const auto constraints = elasticity_constraints(disc, pr);
  const int n = static_cast<int>(sys.rhs.size());
  std::vector<int> free_index(n, 0);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  for (const auto& [dof, value] : constraints) {
    free_index[dof] = -1;
    u[dof] = value;
  }
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (free_index[i] == 0) free_index[i] = nf++;
    else free_index[i] = -1;
  if (nf == 0) throw NumericalError("all displacement dofs are constrained");

  Triplets trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  for (int col = 0; col < sys.matrix.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, col); it; ++it) {
      const int r = free_index[it.row()];
      if (r < 0) continue;
      const int c = free_index[it.col()];
      if (c >= 0) trip.emplace_back(r, c, it.value());
      else rhs[r] -= it.value() * u[it.col()];
    }
  for (int i = 0; i < n; ++i)
    if (free_index[i] >= 0) rhs[free_index[i]] += sys.rhs[i];
  Eigen::SparseMatrix<double> kff(nf, nf);
  kff.setFromTriplets(trip.begin(), trip.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(kff);
  if (ldlt.info() != Eigen::Success) throw NumericalError("elasticity factorization failed");
  const Eigen::VectorXd uf = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !uf.allFinite())
    throw NumericalError("elasticity system is singular (disconnected load path?)");

  ElasticitySolution sol;
  sol.relative_residual = relative_residual(kff, uf, rhs);
  if (!(sol.relative_residual <= kSolveTolerance))
    throw NumericalError("elasticity solve did not reach the residual tolerance (disconnected load path?)");
  for (int i = 0; i < n; ++i)
    if (free_index[i] >= 0) u[i] = uf[free_index[i]];
  sol.dofs = static_cast<std::size_t>(n);
  sol.constrained = constraints.size();
  sol.ux.assign(disc.basis().size(), 0.0);
  sol.uy.assign(disc.basis().size(), 0.0);
  for (std::size_t a = 0; a < disc.active_count(); ++a) {
    sol.ux[disc.active_functions()[a]] = u[2 * a];
    sol.uy[disc.active_functions()[a]] = u[2 * a + 1];
  }
  return sol;
}

Vec3 displacement(const BackgroundDiscretization& disc, const ElasticitySolution& sol, const Vec3& x) {
  return {eval(disc, sol.ux, x), eval(disc, sol.uy, x), 0.0};
}

Vec3 stress(const BackgroundDiscretization& disc, const ElasticitySolution& sol, const ElasticityProblem& pr,
            const Vec3& x) {
  const double exx = eval(disc, sol.ux, x, 0), eyy = eval(disc, sol.uy, x, 1);
  const double exy = 0.5 * (eval(disc, sol.ux, x, 1) + eval(disc, sol.uy, x, 0));
  const double tr = exx + eyy;
  return {pr.lambda * tr + 2.0 * pr.mu * exx, pr.lambda * tr + 2.0 * pr.mu * eyy, 2.0 * pr.mu * exy};
}

double effective_modulus(const BackgroundDiscretization& disc, const ElasticitySolution& sol,
                         const ElasticityProblem& pr) {
  const Box& box = disc.basis().box();
  const double length = box.length(1), volume = box.length(0) * box.length(1);
  double s = 0.0;
  for (const CellQuadrature& cq : disc.quadrature().cells)
    for (const QuadPoint& q : cq.points) s += q.w * stress(disc, sol, pr, q.x)[1];
  return length / pr.u_bar * s / volume;
}

// ---------------------------------------------------------------------------
// Stokes

LinearSystem assemble_stokes(const BackgroundDiscretization& disc, const StokesProblem& pr) {
  const int n = static_cast<int>(3 * disc.active_count());
  const double mu = pr.mu, h = disc.h();
  Triplets trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  LocalBasis lb(disc, 1);
  auto u_dof = [&](int j, int a) { return 3 * lb.active[j] + a; };
  auto p_dof = [&](int j) { return 3 * lb.active[j] + 2; };

  for (const CellQuadrature& cq : disc.quadrature().cells) {
    for (const QuadPoint& q : cq.points) {
      lb.at(disc, cq.cell, q.x);
      const int m = lb.vals.local_count();
      for (int i = 0; i < m; ++i) {
        const Vec3 gi = lb.vals.gradient(i);
        for (int j = 0; j < m; ++j) {
          const Vec3 gj = lb.vals.gradient(j);
          const double nj = lb.vals.value(j);
          const double gg = gi[0] * gj[0] + gi[1] * gj[1];
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              double v = mu * gi[b] * gj[a];
              if (a == b) v += mu * gg;
              if (v != 0.0) trip.emplace_back(u_dof(i, a), u_dof(j, b), v * q.w);
            }
            // -(p, div v) and its transpose -(q, div u).
            const double b = -nj * gi[a] * q.w;
            if (b != 0.0) {
              trip.emplace_back(u_dof(i, a), p_dof(j), b);
              trip.emplace_back(p_dof(j), u_dof(i, a), b);
            }
          }
        }
      }
    }
  }

  // Symmetric Nitsche terms on the immersed boundary and on wall sides.
  auto nitsche = [&](const FacetQuadrature& fq) {
    const Vec3& nv = fq.normal;
    for (const QuadPoint& q : fq.points) {
      lb.at(disc, fq.cell, q.x);
      const int m = lb.vals.local_count();
      for (int i = 0; i < m; ++i) {
        const Vec3 gi = lb.vals.gradient(i);
        const double ni = lb.vals.value(i), dni = gi[0] * nv[0] + gi[1] * nv[1];
        for (int j = 0; j < m; ++j) {
          const Vec3 gj = lb.vals.gradient(j);
          const double nj = lb.vals.value(j), dnj = gj[0] * nv[0] + gj[1] * nv[1];
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              double v = -mu * ni * (gj[a] * nv[b]) - mu * nj * (gi[b] * nv[a]);
              if (a == b) v += -mu * ni * dnj - mu * nj * dni + mu * pr.beta / h * ni * nj;
              if (v != 0.0) trip.emplace_back(u_dof(i, a), u_dof(j, b), v * q.w);
            }
            if (pr.nitsche_pressure) {
              const double c = ni * nj * nv[a] * q.w;
              if (c != 0.0) {
                trip.emplace_back(u_dof(i, a), p_dof(j), c);
                trip.emplace_back(p_dof(j), u_dof(i, a), c);
              }
            }
          }
        }
      }
    }
  };
  for (const FacetQuadrature& fq : disc.quadrature().immersed) nitsche(fq);
  for (const FacetQuadrature& fq : disc.quadrature().exterior) {
    const SideKind kind = pr.sides[fq.side];
    if (kind == SideKind::wall) {
      nitsche(fq);
    } else if (kind == SideKind::inflow) {
      for (const QuadPoint& q : fq.points) {
        lb.at(disc, fq.cell, q.x);
        for (int i = 0; i < lb.vals.local_count(); ++i)
          for (int a = 0; a < 2; ++a) rhs[u_dof(i, a)] -= pr.p_bar * lb.vals.value(i) * fq.normal[a] * q.w;
      }
    }
  }

  const int k = disc.degree();
  if (pr.ghost) add_face_penalty(disc, true, k, pr.gamma_ghost * mu * std::pow(h, 2 * k - 1), 3, 0, 2, trip);
  if (pr.skeleton) add_face_penalty(disc, false, k, -pr.gamma / mu * std::pow(h, 2 * k + 1), 3, 2, 1, trip);

  LinearSystem sys;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.rhs = rhs;
  return sys;
}

StokesSolution solve_stokes(const BackgroundDiscretization& disc, const StokesProblem& pr) {
  check(pr);
  LinearSystem sys = assemble_stokes(disc, pr);
  sys.matrix.makeCompressed();
  const std::string penalties = " (gamma = " + std::to_string(pr.skeleton ? pr.gamma : 0.0) +
                                ", gamma_ghost = " + std::to_string(pr.ghost ? pr.gamma_ghost : 0.0) + ")";
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(sys.matrix);
  if (lu.info() != Eigen::Success) throw NumericalError("Stokes system is singular" + penalties);
  const Eigen::VectorXd x = lu.solve(sys.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw NumericalError("Stokes solve failed" + penalties);
  StokesSolution sol;
  sol.relative_residual = relative_residual(sys.matrix, x, sys.rhs);
  if (!(sol.relative_residual <= kSolveTolerance))
    throw NumericalError("Stokes solve did not reach the residual tolerance" + penalties);
  sol.dofs = static_cast<std::size_t>(x.size());
  const std::size_t nb = disc.basis().size();
  sol.ux.assign(nb, 0.0);
  sol.uy.assign(nb, 0.0);
  sol.p.assign(nb, 0.0);
  for (std::size_t a = 0; a < disc.active_count(); ++a) {
    const std::size_t f = disc.active_functions()[a];
    sol.ux[f] = x[3 * a];
    sol.uy[f] = x[3 * a + 1];
    sol.p[f] = x[3 * a + 2];
  }
  return sol;
}

Vec3 velocity(const BackgroundDiscretization& disc, const StokesSolution& sol, const Vec3& x) {
  return {eval(disc, sol.ux, x), eval(disc, sol.uy, x), 0.0};
}

double pressure(const BackgroundDiscretization& disc, const StokesSolution& sol, const Vec3& x) {
  return eval(disc, sol.p, x);
}

double outflow_flux(const BackgroundDiscretization& disc, const StokesSolution& sol, int side, double lo, double hi) {
  const int t = 1 - side / 2;
  double flux = 0.0;
  for (const FacetQuadrature& fq : disc.quadrature().exterior) {
    if (fq.side != side || fq.points.empty()) continue;
    double mid = 0.0, wsum = 0.0;
    for (const QuadPoint& q : fq.points) {
      mid += q.w * q.x[t];
      wsum += q.w;
    }
    if (wsum > 0.0) mid /= wsum;
    if (mid < lo || mid > hi) continue;
    for (const QuadPoint& q : fq.points) flux += q.w * dot(velocity(disc, sol, q.x), fq.normal);
  }
  return flux;
}

double ghost_energy(const BackgroundDiscretization& disc, const std::vector<double>& u, int k) {
  double e = 0.0;
  for (const MeshFace& f : disc.skeleton_faces()) {
    if (!f.ghost) continue;
    for_each_face_point(disc, f, k, [&](const Vec3&, double w, const FaceJump& fj) {
      double s = 0.0;
      for (std::size_t i = 0; i < fj.jump.size(); ++i) s += fj.jump[i] * u[fj.global[i]];
      e += w * s * s;
    });
  }
  return e;
}

double condition_number(const Eigen::SparseMatrix<double>& m) {
  const Eigen::MatrixXd dense(m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  const double smin = s[s.size() - 1];
  return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

}  // namespace topoiga
