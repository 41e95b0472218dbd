#include "core/tessellation.hpp"

#include <algorithm>
#include <map>

namespace topoiga {

namespace {

constexpr double kZeroTol = 1e-12;

int sign_of(double phi) { return phi > kZeroTol ? 1 : (phi < -kZeroTol ? -1 : 0); }

}  // namespace

ImplicitGeometry ImplicitGeometry::from_field(const LevelSetField& field, double g_crit) {
  ImplicitGeometry g;
  g.nd = field.dim();
  g.box = field.box();
  // The field shares ownership of its basis, so the copy stays valid.
  g.f = [field](const Vec3& x) { return field(x); };
  g.g_crit = g_crit;
  return g;
}

Vec3 BackgroundMesh::cell_size() const {
  Vec3 h{0.0, 0.0, 0.0};
  for (int d = 0; d < nd; ++d) h[d] = box.length(d) / cells[d];
  return h;
}

Box BackgroundMesh::cell_box(const Index3& c) const {
  Box b;
  for (int d = 0; d < nd; ++d) {
    b.lo[d] = c[d] == 0 ? box.lo[d] : box.lo[d] + c[d] * (box.length(d) / cells[d]);
    b.hi[d] = c[d] + 1 == cells[d] ? box.hi[d] : box.lo[d] + (c[d] + 1) * (box.length(d) / cells[d]);
  }
  return b;
}

CellState classify_box(const ImplicitGeometry& geom, const Box& box, int extra_depth) {
  const int nd = geom.nd;
  const int m = kClassifySamples;
  Index3 n{1, 1, 1};
  for (int d = 0; d < nd; ++d) n[d] = m + 1;
  std::vector<double> phi(product(n));
  bool pos = false, neg = false;
  double min_abs = 1e300;
  for_each_index(nd, Index3{0, 0, 0}, n, [&](const Index3& i) {
    Vec3 x{0.0, 0.0, 0.0};
    for (int d = 0; d < nd; ++d) x[d] = box.lo[d] + box.length(d) * i[d] / m;
    const double v = geom.phi(x);
    phi[linear_index(i, n)] = v;
    pos = pos || sign_of(v) > 0;
    neg = neg || sign_of(v) < 0;
    min_abs = std::min(min_abs, std::abs(v));
  });
  if (pos && neg) return CellState::cut;
  // Largest change between lattice neighbours bounds the slope per sample step.
  double step = 0.0;
  for_each_index(nd, Index3{0, 0, 0}, n, [&](const Index3& i) {
    for (int d = 0; d < nd; ++d) {
      if (i[d] + 1 >= n[d]) continue;
      Index3 j = i;
      ++j[d];
      step = std::max(step, std::abs(phi[linear_index(i, n)] - phi[linear_index(j, n)]));
    }
  });
  const CellState guess = pos ? CellState::inside : CellState::outside;
  if (extra_depth > 0 && min_abs < step) {
    Index3 two{1, 1, 1};
    for (int d = 0; d < nd; ++d) two[d] = 2;
    bool seen_in = false, seen_out = false, seen_cut = false;
    for_each_index(nd, Index3{0, 0, 0}, two, [&](const Index3& k) {
      Box child = box;
      for (int d = 0; d < nd; ++d) {
        const double mid = 0.5 * (box.lo[d] + box.hi[d]);
        child.lo[d] = k[d] ? mid : box.lo[d];
        child.hi[d] = k[d] ? box.hi[d] : mid;
      }
      const CellState s = classify_box(geom, child, extra_depth - 1);
      seen_in = seen_in || s == CellState::inside;
      seen_out = seen_out || s == CellState::outside;
      seen_cut = seen_cut || s == CellState::cut;
    });
    if (seen_cut || (seen_in && seen_out)) return CellState::cut;
    return seen_in ? CellState::inside : CellState::outside;
  }
  return guess;
}

CellClassification classify_cells(const ImplicitGeometry& geom, const BackgroundMesh& mesh) {
  CellClassification out;
  out.state.resize(mesh.size());
  for_each_index(mesh.nd, Index3{0, 0, 0}, mesh.cells, [&](const Index3& c) {
    const CellState s = classify_box(geom, mesh.cell_box(c));
    out.state[linear_index(c, mesh.cells)] = s;
    if (s == CellState::inside) out.inside.push_back(c);
    if (s == CellState::outside) out.outside.push_back(c);
    if (s == CellState::cut) out.cut.push_back(c);
  });
  return out;
}

double SubCell::measure(int nd) const {
  if (is_box) {
    double m = 1.0;
    for (int d = 0; d < nd; ++d) m *= box.length(d);
    return m;
  }
  return std::abs(simplex_measure(nd, v.data()));
}

double Facet::measure(int nd) const { return facet_measure(nd, v.data()); }

namespace {

using Key = std::array<long long, 3>;

// Point on the tessellation lattice plus the set of box sides it lies on.
struct Vertex {
  Vec3 x{0.0, 0.0, 0.0};
  unsigned sides = 0;
};

// Points are addressed on a lattice of half the finest sub-cell size, so that
// neighbouring cells compute bit-identical coordinates, values and crossings.
class LeafContext {
 public:
  LeafContext(const ImplicitGeometry& g, const BackgroundMesh& mesh, int rho_max)
      : g_(g), mesh_(mesh), nd_(mesh.nd) {
    for (int d = 0; d < nd_; ++d) {
      kmax_[d] = static_cast<long long>(mesh.cells[d]) << (rho_max + 1);
      half_[d] = mesh.box.length(d) / static_cast<double>(kmax_[d]);
    }
  }

  Vertex vertex(const Key& k) const {
    Vertex v;
    for (int d = 0; d < nd_; ++d) {
      if (k[d] == 0) {
        v.x[d] = mesh_.box.lo[d];
        v.sides |= 1u << (2 * d);
      } else if (k[d] == kmax_[d]) {
        v.x[d] = mesh_.box.hi[d];
        v.sides |= 1u << (2 * d + 1);
      } else {
        v.x[d] = mesh_.box.lo[d] + static_cast<double>(k[d]) * half_[d];
      }
    }
    return v;
  }

  double phi(const Key& k) {
    auto it = phi_.find(k);
    if (it != phi_.end()) return it->second;
    double v = g_.phi(vertex(k).x);
    if (std::abs(v) <= kZeroTol) {
      // Crossing through a lattice point: treat the point as outside.
      ++degenerate;
      v = -2.0 * kZeroTol;
    }
    return phi_[k] = v;
  }

  Vertex crossing(Key a, Key b) {
    if (b < a) std::swap(a, b);
    const auto key = std::make_pair(a, b);
    auto it = cross_.find(key);
    if (it != cross_.end()) return it->second;
    const Vertex va = vertex(a), vb = vertex(b);
    double fa = phi(a), fb = phi(b);
    double ta = 0.0, tb = 1.0;
    auto at = [&](double t) { return va.x + t * (vb.x - va.x); };
    // Illinois regula falsi on the edge parameter.
    int side = 0;
    double t = 0.5;
    for (int it2 = 0; it2 < 200 && tb - ta > 1e-15; ++it2) {
      t = (ta * fb - tb * fa) / (fb - fa);
      if (!(t > ta && t < tb)) t = 0.5 * (ta + tb);
      const double ft = g_.phi(at(t));
      if (ft == 0.0) break;
      if ((ft > 0) == (fa > 0)) {
        ta = t;
        fa = ft;
        if (side == -1) fb *= 0.5;
        side = -1;
      } else {
        tb = t;
        fb = ft;
        if (side == 1) fa *= 0.5;
        side = 1;
      }
    }
    Vertex c{at(t), va.sides & vb.sides};
    for (int d = 0; d < nd_; ++d) {
      if (c.sides & (1u << (2 * d))) c.x[d] = mesh_.box.lo[d];
      if (c.sides & (1u << (2 * d + 1))) c.x[d] = mesh_.box.hi[d];
    }
    return cross_[key] = c;
  }

  int degenerate = 0;

 private:
  const ImplicitGeometry& g_;
  const BackgroundMesh& mesh_;
  int nd_;
  Key kmax_{1, 1, 1};
  Vec3 half_{0.0, 0.0, 0.0};
  std::map<Key, double> phi_;
  std::map<std::pair<Key, Key>, Vertex> cross_;
};

void box_exterior_facets(int nd_, const Box& box, unsigned sides, std::vector<Facet>& exterior_) {
  for (int d = 0; d < nd_; ++d)
    for (int hi = 0; hi < 2; ++hi) {
      const int side = 2 * d + hi;
      if (!(sides & (1u << side))) continue;
      Facet f;
      f.side = side;
      f.normal[d] = hi ? 1.0 : -1.0;
      const double x = hi ? box.hi[d] : box.lo[d];
      if (nd_ == 2) {
        const int e = 1 - d;
        f.v[0][d] = f.v[1][d] = x;
        f.v[0][e] = box.lo[e];
        f.v[1][e] = box.hi[e];
        exterior_.push_back(f);
      } else {
        const int e1 = (d + 1) % 3, e2 = (d + 2) % 3;
        Vec3 c[4];
        for (int k = 0; k < 4; ++k) {
          c[k][d] = x;
          c[k][e1] = (k == 1 || k == 2) ? box.hi[e1] : box.lo[e1];
          c[k][e2] = (k >= 2) ? box.hi[e2] : box.lo[e2];
        }
        f.v = {c[0], c[1], c[2]};
        exterior_.push_back(f);
        f.v = {c[0], c[2], c[3]};
        exterior_.push_back(f);
      }
    }
}

// Faces of an inside cell on which phi vanishes at every lattice sample and
// whose neighbour is outside. Returns false when phi touches zero only on part
// of the cell boundary, so that the cell needs the full cut treatment.
bool zero_contact(const ImplicitGeometry& geom, const BackgroundMesh& mesh, const std::vector<CellState>& state,
                  const Index3& c, unsigned box_sides, unsigned& zero_faces) {
  const int nd = mesh.nd, m = kClassifySamples;
  const Box box = mesh.cell_box(c);
  Index3 n{1, 1, 1};
  for (int d = 0; d < nd; ++d) n[d] = m + 1;
  bool any_zero = false;
  std::array<bool, 6> all_zero{};
  all_zero.fill(true);
  for_each_index(nd, Index3{0, 0, 0}, n, [&](const Index3& i) {
    bool on_face = false;
    for (int d = 0; d < nd; ++d) on_face = on_face || i[d] == 0 || i[d] == m;
    if (!on_face) return;
    Vec3 x{0.0, 0.0, 0.0};
    for (int d = 0; d < nd; ++d) x[d] = i[d] == m ? box.hi[d] : box.lo[d] + box.length(d) * i[d] / m;
    const bool zero = sign_of(geom.phi(x)) == 0;
    any_zero = any_zero || zero;
    for (int d = 0; d < nd; ++d) {
      if (i[d] == 0) all_zero[2 * d] = all_zero[2 * d] && zero;
      if (i[d] == m) all_zero[2 * d + 1] = all_zero[2 * d + 1] && zero;
    }
  });
  zero_faces = 0;
  if (!any_zero) return true;
  bool covered = true;
  for_each_index(nd, Index3{0, 0, 0}, n, [&](const Index3& i) {
    bool on_zero_face = false, on_face = false;
    for (int d = 0; d < nd; ++d) {
      on_face = on_face || i[d] == 0 || i[d] == m;
      on_zero_face = on_zero_face || (i[d] == 0 && all_zero[2 * d]) || (i[d] == m && all_zero[2 * d + 1]);
    }
    if (!on_face || on_zero_face) return;
    Vec3 x{0.0, 0.0, 0.0};
    for (int d = 0; d < nd; ++d) x[d] = i[d] == m ? box.hi[d] : box.lo[d] + box.length(d) * i[d] / m;
    if (sign_of(geom.phi(x)) == 0) covered = false;
  });
  if (!covered) return false;
  for (int side = 0; side < 2 * nd; ++side) {
    if (!all_zero[side] || (box_sides & (1u << side))) continue;
    Index3 nb = c;
    nb[side / 2] += side % 2 ? 1 : -1;
    if (state[linear_index(nb, mesh.cells)] == CellState::outside) zero_faces |= 1u << side;
  }
  return true;
}

class CellTessellator {
 public:
  CellTessellator(const ImplicitGeometry& g, const BackgroundMesh& mesh, int rho_max, CutCell& out)
      : g_(g), mesh_(mesh), rho_max_(rho_max), nd_(mesh.nd), ctx_(g, mesh, rho_max), out_(out) {}

  void run(const Index3& cell) {
    Key lo{0, 0, 0};
    for (int d = 0; d < nd_; ++d) lo[d] = static_cast<long long>(cell[d]) << (rho_max_ + 1);
    recurse(lo, 1ll << (rho_max_ + 1), 0);
  }

  int degenerate() const { return ctx_.degenerate; }

 private:
  Box box_of(const Key& lo, long long size) const {
    Key hi = lo;
    for (int d = 0; d < nd_; ++d) hi[d] += size;
    Box b;
    const Vertex a = ctx_.vertex(lo), c = ctx_.vertex(hi);
    b.lo = a.x;
    b.hi = c.x;
    return b;
  }

  unsigned box_sides(const Key& lo, long long size) const {
    Key hi = lo;
    for (int d = 0; d < nd_; ++d) hi[d] += size;
    return ctx_.vertex(lo).sides | ctx_.vertex(hi).sides;
  }

  void recurse(const Key& lo, long long size, int depth) {
    const Box box = box_of(lo, size);
    const CellState s = depth == 0 ? CellState::cut : classify_box(g_, box, 1);
    if (s == CellState::outside) return;
    if (s == CellState::inside) {
      SubCell part;
      part.depth = depth;
      part.is_box = true;
      part.box = box;
      out_.parts.push_back(part);
      add_box_exterior(box, box_sides(lo, size));
      return;
    }
    if (depth < rho_max_) {
      const long long h = size / 2;
      Index3 two{1, 1, 1};
      for (int d = 0; d < nd_; ++d) two[d] = 2;
      for_each_index(nd_, Index3{0, 0, 0}, two, [&](const Index3& k) {
        Key c = lo;
        for (int d = 0; d < nd_; ++d) c[d] += k[d] * h;
        recurse(c, h, depth + 1);
      });
      return;
    }
    if (nd_ == 2)
      leaf_2d(lo, size);
    else
      leaf_3d(lo, size);
  }

  void add_box_exterior(const Box& box, unsigned sides) { box_exterior_facets(nd_, box, sides, exterior_); }

  void add_simplex(const Vertex* v) {
    SubCell part;
    part.depth = rho_max_;
    for (int a = 0; a <= nd_; ++a) part.v[a] = v[a].x;
    if (std::abs(simplex_measure(nd_, part.v.data())) == 0.0) return;
    out_.parts.push_back(part);
    // Exterior faces: simplex faces whose vertices all lie on one box side.
    for (int skip = 0; skip <= nd_; ++skip) {
      unsigned common = ~0u;
      Facet f;
      int k = 0;
      for (int a = 0; a <= nd_; ++a) {
        if (a == skip) continue;
        common &= v[a].sides;
        f.v[k++] = v[a].x;
      }
      if (!common) continue;
      for (int side = 0; side < 2 * nd_; ++side) {
        if (!(common & (1u << side))) continue;
        f.side = side;
        f.normal = {0.0, 0.0, 0.0};
        f.normal[side / 2] = (side % 2) ? 1.0 : -1.0;
        if (f.measure(nd_) > 0.0) exterior_.push_back(f);
      }
    }
  }

  void add_facet(const Vertex* v, const Vec3& toward_outside) {
    Facet f;
    for (int a = 0; a < nd_; ++a) f.v[a] = v[a].x;
    Vec3 n{0.0, 0.0, 0.0};
    if (nd_ == 2) {
      const Vec3 t = f.v[1] - f.v[0];
      n = {t[1], -t[0], 0.0};
    } else {
      n = cross(f.v[1] - f.v[0], f.v[2] - f.v[0]);
    }
    const double len = norm(n);
    if (len == 0.0) return;
    n = (1.0 / len) * n;
    if (dot(n, toward_outside - f.v[0]) < 0.0) n = -1.0 * n;
    f.normal = n;
    f.side = -1;
    out_.facets.push_back(f);
  }

  // Cut a simplex given by lattice keys along the linear interpolant of the
  // exact edge crossings.
  void cut_simplex(const Key* k) {
    const int nv = nd_ + 1;
    std::vector<int> in, outv;
    for (int a = 0; a < nv; ++a) (ctx_.phi(k[a]) > 0.0 ? in : outv).push_back(a);
    Vertex v[4];
    for (int a = 0; a < nv; ++a) v[a] = ctx_.vertex(k[a]);
    if (in.empty()) return;
    if (outv.empty()) {
      add_simplex(v);
      return;
    }
    auto X = [&](int a, int b) { return ctx_.crossing(k[a], k[b]); };
    if (nd_ == 2) {
      if (in.size() == 1) {
        const int a = in[0], b = outv[0], c = outv[1];
        const Vertex t[3] = {v[a], X(a, b), X(a, c)};
        add_simplex(t);
        const Vertex s[2] = {t[1], t[2]};
        add_facet(s, v[b].x);
      } else {
        const int a = in[0], b = in[1], c = outv[0];
        const Vertex xa = X(a, c), xb = X(b, c);
        const Vertex t1[3] = {v[a], v[b], xb};
        const Vertex t2[3] = {v[a], xb, xa};
        add_simplex(t1);
        add_simplex(t2);
        const Vertex s[2] = {xa, xb};
        add_facet(s, v[c].x);
      }
      return;
    }
    if (in.size() == 1) {
      const int a = in[0];
      const Vertex t[4] = {v[a], X(a, outv[0]), X(a, outv[1]), X(a, outv[2])};
      add_simplex(t);
      add_facet(t + 1, v[outv[0]].x);
    } else if (in.size() == 3) {
      const int d = outv[0];
      const Vertex a0 = v[in[0]], a1 = v[in[1]], a2 = v[in[2]];
      const Vertex b0 = X(in[0], d), b1 = X(in[1], d), b2 = X(in[2], d);
      prism(a0, a1, a2, b0, b1, b2);
      const Vertex f[3] = {b0, b1, b2};
      add_facet(f, v[d].x);
    } else {
      const int a = in[0], b = in[1], c = outv[0], d = outv[1];
      const Vertex a0 = v[a], a1 = X(a, c), a2 = X(a, d);
      const Vertex b0 = v[b], b1 = X(b, c), b2 = X(b, d);
      prism(a0, a1, a2, b0, b1, b2);
      // Quad (a1, a2, b2, b1) split along the prism diagonal a2-b1.
      const Vertex f1[3] = {a1, a2, b1};
      const Vertex f2[3] = {a2, b2, b1};
      add_facet(f1, v[c].x);
      add_facet(f2, v[c].x);
    }
  }

  void prism(const Vertex& a0, const Vertex& a1, const Vertex& a2, const Vertex& b0, const Vertex& b1,
             const Vertex& b2) {
    const Vertex t1[4] = {a0, a1, a2, b0};
    const Vertex t2[4] = {a1, a2, b0, b1};
    const Vertex t3[4] = {a2, b0, b1, b2};
    add_simplex(t1);
    add_simplex(t2);
    add_simplex(t3);
  }

  void leaf_2d(const Key& lo, long long size) {
    const Key c[4] = {{lo[0], lo[1], 0},
                      {lo[0] + size, lo[1], 0},
                      {lo[0] + size, lo[1] + size, 0},
                      {lo[0], lo[1] + size, 0}};
    const Key m{lo[0] + size / 2, lo[1] + size / 2, 0};
    for (int i = 0; i < 4; ++i) {
      const Key t[3] = {m, c[i], c[(i + 1) % 4]};
      cut_simplex(t);
    }
  }

  void leaf_3d(const Key& lo, long long size) {
    const long long h = size / 2;
    const Key m{lo[0] + h, lo[1] + h, lo[2] + h};
    for (int d = 0; d < 3; ++d)
      for (int s = 0; s < 2; ++s) {
        const int e1 = (d + 1) % 3, e2 = (d + 2) % 3;
        Key f = m;
        f[d] = lo[d] + s * size;
        Key corner[4];
        for (int k = 0; k < 4; ++k) {
          corner[k][d] = f[d];
          corner[k][e1] = lo[e1] + ((k == 1 || k == 2) ? size : 0);
          corner[k][e2] = lo[e2] + (k >= 2 ? size : 0);
        }
        for (int k = 0; k < 4; ++k) {
          const Key t[4] = {m, f, corner[k], corner[(k + 1) % 4]};
          cut_simplex(t);
        }
      }
  }

  const ImplicitGeometry& g_;
  const BackgroundMesh& mesh_;
  int rho_max_;
  int nd_;
  LeafContext ctx_;
  CutCell& out_;

 public:
  std::vector<Facet> exterior_;
};

}  // namespace

CutCell tessellate_cell(const ImplicitGeometry& geom, const BackgroundMesh& mesh, const Index3& cell, int rho_max,
                        int* degenerate) {
  CutCell out;
  out.cell = cell;
  CellTessellator t(geom, mesh, rho_max, out);
  t.run(cell);
  if (degenerate) *degenerate = t.degenerate();
  return out;
}

TessellatedDomain tessellate(const ImplicitGeometry& geom, const BackgroundMesh& mesh,
                             const TessellationParams& params) {
  if (geom.nd != mesh.nd) throw DimensionError("geometry and background mesh dimensions differ");
  if (params.rho_max < 0) throw Error("bisection depth must be non-negative");
  TessellatedDomain dom;
  dom.nd = mesh.nd;
  dom.mesh = mesh;
  dom.rho_max = params.rho_max;
  const CellClassification cls = classify_cells(geom, mesh);
  dom.state = cls.state;
  std::vector<Index3> cut = cls.cut;
  for (const Index3& c : cls.inside) {
    unsigned sides = 0;
    for (int d = 0; d < mesh.nd; ++d) {
      if (c[d] == 0) sides |= 1u << (2 * d);
      if (c[d] == mesh.cells[d] - 1) sides |= 1u << (2 * d + 1);
    }
    unsigned zero_faces = 0;
    if (!zero_contact(geom, mesh, cls.state, c, sides, zero_faces)) {
      cut.push_back(c);
      dom.state[linear_index(c, mesh.cells)] = CellState::cut;
      continue;
    }
    std::vector<Facet> ext;
    box_exterior_facets(mesh.nd, mesh.cell_box(c), sides, ext);
    for (const Facet& f : ext) dom.exterior_facets.push_back({c, f});
    if (zero_faces == 0) {
      dom.interior_cells.push_back(c);
      continue;
    }
    // The boundary runs along whole cell faces: keep the full cell as one
    // part and put immersed facets on those faces.
    CutCell cc;
    cc.cell = c;
    SubCell whole;
    whole.is_box = true;
    whole.box = mesh.cell_box(c);
    cc.parts.push_back(whole);
    box_exterior_facets(mesh.nd, whole.box, zero_faces, cc.facets);
    for (Facet& f : cc.facets) f.side = -1;
    dom.state[linear_index(c, mesh.cells)] = CellState::cut;
    dom.cut_cells.push_back(std::move(cc));
  }
  for (const Index3& c : cut) {
    if (dom.state[linear_index(c, mesh.cells)] != CellState::cut) continue;
    CutCell cc;
    cc.cell = c;
    CellTessellator t(geom, mesh, params.rho_max, cc);
    t.run(c);
    dom.degenerate_crossings += t.degenerate();
    for (const Facet& f : t.exterior_) dom.exterior_facets.push_back({c, f});
    if (cc.parts.empty()) {
      // Sampling flagged a sign change that the leaves do not resolve.
      dom.state[linear_index(c, mesh.cells)] = CellState::outside;
      continue;
    }
    dom.cut_cells.push_back(std::move(cc));
  }
  return dom;
}

double TessellatedDomain::volume() const {
  const Vec3 h = mesh.cell_size();
  double cell = 1.0;
  for (int d = 0; d < nd; ++d) cell *= h[d];
  double v = cell * static_cast<double>(interior_cells.size());
  for (const CutCell& c : cut_cells)
    for (const SubCell& s : c.parts) v += s.measure(nd);
  return v;
}

double TessellatedDomain::immersed_boundary_measure() const {
  double m = 0.0;
  for (const CutCell& c : cut_cells)
    for (const Facet& f : c.facets) m += f.measure(nd);
  return m;
}

double TessellatedDomain::exterior_boundary_measure(int side) const {
  double m = 0.0;
  for (const ExteriorFacet& f : exterior_facets)
    if (f.facet.side == side) m += f.facet.measure(nd);
  return m;
}

DomainQuadrature build_quadrature(const TessellatedDomain& domain, const QuadratureSchedule& schedule) {
  DomainQuadrature q;
  q.nd = domain.nd;
  const int nd = domain.nd;
  for (const Index3& c : domain.interior_cells) {
    CellQuadrature cq{c, false, {}};
    box_rule(nd, domain.mesh.cell_box(c), schedule.k_max, cq.points);
    q.cells.push_back(std::move(cq));
  }
  for (const CutCell& c : domain.cut_cells) {
    CellQuadrature cq{c.cell, true, {}};
    for (const SubCell& s : c.parts) {
      if (s.is_box)
        box_rule(nd, s.box, schedule.order(s.depth), cq.points);
      else
        simplex_rule(nd, s.v.data(), schedule.order(s.depth), cq.points);
    }
    q.cells.push_back(std::move(cq));
    for (const Facet& f : c.facets) {
      FacetQuadrature fq{c.cell, -1, f.normal, {}};
      facet_rule(nd, f.v.data(), schedule.k_max, fq.points);
      q.immersed.push_back(std::move(fq));
    }
  }
  for (const ExteriorFacet& e : domain.exterior_facets) {
    FacetQuadrature fq{e.cell, e.facet.side, e.facet.normal, {}};
    facet_rule(nd, e.facet.v.data(), schedule.k_max, fq.points);
    q.exterior.push_back(std::move(fq));
  }
  return q;
}

double DomainQuadrature::integrate(const std::function<double(const Vec3&)>& g) const {
  double s = 0.0;
  for (const CellQuadrature& c : cells)
    for (const QuadPoint& p : c.points) s += p.w * g(p.x);
  return s;
}

double DomainQuadrature::integrate_boundary(const std::function<double(const Vec3&, const Vec3&)>& g,
                                            bool with_exterior) const {
  double s = 0.0;
  for (const FacetQuadrature& f : immersed)
    for (const QuadPoint& p : f.points) s += p.w * g(p.x, f.normal);
  if (with_exterior)
    for (const FacetQuadrature& f : exterior)
      for (const QuadPoint& p : f.points) s += p.w * g(p.x, f.normal);
  return s;
}

}  // namespace topoiga
