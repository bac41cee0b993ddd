#include "aniso/geometry.hpp"

#include "aniso/quadrature.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aniso {

std::string to_string(CondTag tag) {
  switch (tag) {
    case CondTag::Cond1_2D: return "COND1_2D";
    case CondTag::Cond2_3D_Type1: return "COND2_3D_TYPE1";
    case CondTag::Cond2_3D_Type2: return "COND2_3D_TYPE2";
  }
  return "?";
}

std::vector<Vec> reference_vertices(int dim, CondTag cond) {
  if (dim == 2) return {Vec{{0, 0}}, Vec{{1, 0}}, Vec{{0, 1}}};
  if (cond == CondTag::Cond2_3D_Type2) return {Vec{{0, 0, 0}}, Vec{{1, 0, 0}}, Vec{{1, 1, 0}}, Vec{{0, 0, 1}}};
  return {Vec{{0, 0, 0}}, Vec{{1, 0, 0}}, Vec{{0, 1, 0}}, Vec{{0, 0, 1}}};
}

std::vector<Vec> ElementGeometry::reference_vertices() const { return aniso::reference_vertices(dim, cond); }

Vec ElementGeometry::inverse_map(const Vec& x) const {
  Mat a = A();
  return a.partialPivLu().solve(Vec(x - b));
}

namespace {

struct Edge {
  int i, j;          // local vertex indices
  Real length;
  std::pair<int, int> key;  // sorted global ids
};

class EdgeTable {
 public:
  EdgeTable(std::span<const Vec> pts, std::span<const int> ids) : n_(static_cast<int>(pts.size())) {
    for (int i = 0; i < n_; ++i) {
      p_[i] = pts[i].cast<Real>();
      id_[i] = ids.empty() ? i : ids[i];
    }
  }

  Edge edge(int i, int j) const {
    Edge e{i, j, (p_[i] - p_[j]).norm(), {std::min(id_[i], id_[j]), std::max(id_[i], id_[j])}};
    return e;
  }

  /// Longest edge; equal lengths resolved by the smaller sorted id pair.
  static bool longer(const Edge& a, const Edge& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.key < b.key;
  }
  static bool shorter(const Edge& a, const Edge& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.key < b.key;
  }

  std::vector<Edge> all() const {
    std::vector<Edge> out;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) out.push_back(edge(i, j));
    return out;
  }

  Real diameter() const {
    Real h = 0;
    for (const Edge& e : all()) h = std::max(h, e.length);
    return h;
  }

  const VecL& point(int i) const { return p_[i]; }

  std::string describe() const {
    std::ostringstream s;
    s.precision(17);
    s << "edge lengths:";
    for (const Edge& e : all()) s << " |" << e.key.first << "-" << e.key.second << "|=" << static_cast<double>(e.length);
    return s.str();
  }

 private:
  int n_;
  std::array<VecL, 4> p_;
  std::array<int, 4> id_{};
};

/// A = Q R with diag(R) > 0, in extended precision.
void positive_qr(const MatL& a, MatL& q, MatL& r) {
  const int d = static_cast<int>(a.rows());
  Eigen::HouseholderQR<MatL> qr(a);
  q = qr.householderQ() * MatL::Identity(d, d);
  r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0) {
      r.row(i) *= -1;
      q.col(i) *= -1;
    }
}

void fill_from_matrix(ElementGeometry& g, const EdgeTable& et, std::span<const Vec> pts, const MatL& a,
                      const std::array<Real, 3>& h) {
  const int d = g.dim;
  MatL q, r;
  positive_qr(a, q, r);
  MatL a_hat_inv = MatL::Zero(d, d);
  g.h.resize(d);
  g.A_hat = Mat::Zero(d, d);
  Real prod_h = 1;
  for (int i = 0; i < d; ++i) {
    g.h(i) = static_cast<double>(h[i]);
    g.A_hat(i, i) = g.h(i);
    a_hat_inv(i, i) = 1 / h[i];
    prod_h *= h[i];
  }
  MatL tilde = r * a_hat_inv;
  g.A_tilde = tilde.cast<double>();
  g.A_rot = q.cast<double>();
  g.b = pts[g.perm[0]];

  Simplex s(pts);
  g.volume = s.volume();
  Real hT = et.diameter();
  g.h_T = static_cast<double>(hT);
  Real gamma = prod_h / s.volume_ext();
  g.gamma = static_cast<double>(gamma);
  g.H_T = static_cast<double>(gamma * hT);
  for (int i = 0; i <= d; ++i) g.ell[i] = s.height(i);

  if (d == 2) {
    g.shear.s = g.A_tilde(0, 1);
    g.shear.t = g.A_tilde(1, 1);
  } else {
    g.shear.s = g.cond == CondTag::Cond2_3D_Type2 ? -g.A_tilde(0, 1) : g.A_tilde(0, 1);
    g.shear.t = g.A_tilde(1, 1);
    g.shear.s21 = g.A_tilde(0, 2);
    g.shear.s22 = g.A_tilde(1, 2);
    g.shear.t2 = g.A_tilde(2, 2);
  }

  // r_i: normalized defining edge vectors (columns of A over h_i).
  for (int i = 0; i < d; ++i) g.r[i] = (a.col(i) / h[i]).cast<double>();
}

bool shear_constraints_hold(const ElementGeometry& g) {
  const double tol = 1e-12;
  const ShearParams& p = g.shear;
  if (g.dim == 2) return p.t > 0 && std::abs(p.s * p.s + p.t * p.t - 1) <= tol;
  const double slack = 1e-10 * g.h_T;
  return p.s > 0 && p.t > 0 && p.t2 > 0 && std::abs(p.s * p.s + p.t * p.t - 1) <= tol &&
         std::abs(p.s21 * p.s21 + p.s22 * p.s22 + p.t2 * p.t2 - 1) <= tol &&
         g.h(1) * p.s <= g.h(0) / 2 + slack && g.h(2) * p.s21 <= g.h(0) / 2 + slack;
}

}  // namespace

ElementGeometry decompose_2d(std::span<const Vec> pts, std::span<const int> ids) {
  if (pts.size() != 3) throw GeometryError("decompose_2d needs 3 points");
  if (simplex_measure(pts) < 1e-300) throw GeometryError("degenerate triangle");
  EdgeTable et(pts, ids);
  auto edges = et.all();
  Edge longest = *std::min_element(edges.begin(), edges.end(), EdgeTable::longer);
  int p1 = 3 - longest.i - longest.j;
  Edge e2 = et.edge(p1, longest.i), e3 = et.edge(p1, longest.j);
  if (!EdgeTable::longer(e2, e3)) std::swap(e2, e3);
  ElementGeometry g;
  g.dim = 2;
  g.cond = CondTag::Cond1_2D;
  g.perm = {p1, e2.j, e3.j, -1};
  MatL a(2, 2);
  a.col(0) = et.point(g.perm[1]) - et.point(p1);
  a.col(1) = et.point(g.perm[2]) - et.point(p1);
  fill_from_matrix(g, et, pts, a, {e2.length, e3.length, 0});
  if (!shear_constraints_hold(g)) throw GeometryError("Condition 1 decomposition failed; " + et.describe());
  return g;
}

ElementGeometry decompose_3d(std::span<const Vec> pts, std::span<const int> ids) {
  if (pts.size() != 4) throw GeometryError("decompose_3d needs 4 points");
  if (simplex_measure(pts) < 1e-300) throw GeometryError("degenerate tetrahedron");
  EdgeTable et(pts, ids);
  auto edges = et.all();
  Edge lmin = *std::min_element(edges.begin(), edges.end(), EdgeTable::shorter);

  // The four edges sharing exactly one endpoint with L_min.
  std::vector<Edge> adjacent;
  for (const Edge& e : edges) {
    int shared = (e.i == lmin.i || e.i == lmin.j) + (e.j == lmin.i || e.j == lmin.j);
    if (shared == 1) adjacent.push_back(e);
  }
  Edge lmax = *std::min_element(adjacent.begin(), adjacent.end(), EdgeTable::longer);
  const int a = (lmax.i == lmin.i || lmax.i == lmin.j) ? lmax.i : lmax.j;
  const int b = lmax.i == a ? lmax.j : lmax.i;
  const int c = lmin.i == a ? lmin.j : lmin.i;
  const int e = 6 - a - b - c;

  // Half-space test; points on the cutting plane count as a's side.
  VecL mid = (et.point(a) + et.point(b)) / 2;
  bool type1 = (et.point(e) - mid).dot(et.point(a) - et.point(b)) >= 0;

  ElementGeometry g;
  g.dim = 3;
  g.cond = type1 ? CondTag::Cond2_3D_Type1 : CondTag::Cond2_3D_Type2;
  g.perm = type1 ? std::array<int, 4>{a, b, c, e} : std::array<int, 4>{b, a, c, e};
  const VecL& p1 = et.point(g.perm[0]);
  const VecL& p2 = et.point(g.perm[1]);
  const VecL& p3 = et.point(g.perm[2]);
  const VecL& p4 = et.point(g.perm[3]);
  MatL m(3, 3);
  m.col(0) = p2 - p1;
  m.col(1) = type1 ? VecL(p3 - p1) : VecL(p3 - p2);
  m.col(2) = p4 - p1;
  fill_from_matrix(g, et, pts, m, {lmax.length, lmin.length, (p4 - p1).norm()});
  if (!shear_constraints_hold(g))
    throw GeometryError("Condition 2 classification failed (" + to_string(g.cond) + "); " + et.describe());
  return g;
}

ElementGeometry decompose(std::span<const Vec> pts, std::span<const int> ids) {
  if (pts.size() == 3) return decompose_2d(pts, ids);
  if (pts.size() == 4) return decompose_3d(pts, ids);
  throw GeometryError("decompose: expected 3 or 4 points");
}

std::vector<ElementGeometry> decompose_mesh(const SimplicialMesh& mesh) {
  std::vector<ElementGeometry> out;
  out.reserve(mesh.num_cells());
  for (int e = 0; e < mesh.num_cells(); ++e) out.push_back(decompose(mesh.cell_vertices(e), mesh.cell(e)));
  return out;
}

SemiRegularity semi_regularity(const std::vector<ElementGeometry>& geo) {
  SemiRegularity s;
  s.gamma.reserve(geo.size());
  for (std::size_t e = 0; e < geo.size(); ++e) {
    s.gamma.push_back(geo[e].gamma);
    if (geo[e].gamma > s.max) {
      s.max = geo[e].gamma;
      s.argmax = static_cast<int>(e);
    }
  }
  return s;
}

SemiRegularity semi_regularity(const SimplicialMesh& mesh) { return semi_regularity(decompose_mesh(mesh)); }

namespace {

/// Singular values, descending, in extended precision.
VecL singular_values(const Mat& a) {
  if (a.rows() == 2 && a.cols() == 2) {
    Real p = a(0, 0), q = a(0, 1), r = a(1, 0), s = a(1, 1);
    // sigma = (|(p+s, q-r)| +- |(p-s, q+r)|) / 2, stable for nearly equal values.
    Real u = std::hypot(p + s, q - r), w = std::hypot(p - s, q + r);
    VecL out(2);
    out << (u + w) / 2, std::abs(u - w) / 2;
    return out;
  }
  MatL al = a.cast<Real>();
  Eigen::JacobiSVD<MatL> svd(al);
  return svd.singularValues();
}

}  // namespace

double spectral_norm(const Mat& a) { return static_cast<double>(singular_values(a)(0)); }

double condition_number(const Mat& a) {
  VecL s = singular_values(a);
  if (s(s.size() - 1) == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(s(0) / s(s.size() - 1));
}

bool BoundsCheck::pass() const {
  return det_rel_error <= 1e-10 && tilde_norm <= tilde_norm_bound + 1e-10 &&
         tilde_cond <= tilde_cond_bound + 1e-8 && vertex_error <= 1e-10 && rot_norm_error <= 1e-12 && params_ok &&
         directions_ok;
}

BoundsCheck check_bounds(const ElementGeometry& g, std::span<const Vec> pts) {
  const int d = g.dim;
  BoundsCheck c;
  Real fact = d == 2 ? 2 : 6;
  Real det = 1;
  for (int i = 0; i < d; ++i) det *= static_cast<Real>(g.A_tilde(i, i)) * static_cast<Real>(g.A_hat(i, i));
  Real vol = simplex_measure(pts);
  c.det_rel_error = static_cast<double>(std::abs(std::abs(det) - fact * vol) / (fact * vol));
  c.tilde_norm = spectral_norm(g.A_tilde);
  c.tilde_norm_bound = d == 2 ? std::sqrt(2.0) : 2.0;
  c.tilde_cond = condition_number(g.A_tilde);
  c.tilde_cond_bound = d == 2 ? g.gamma : 2.0 / 3.0 * g.gamma;
  c.hat_norm = spectral_norm(g.A_hat);
  VecL sv = singular_values(g.A_rot);
  c.rot_norm_error = static_cast<double>(std::max(std::abs(sv(0) - 1), std::abs(1 / sv(sv.size() - 1) - 1)));
  auto ref = g.reference_vertices();
  for (int i = 0; i <= d; ++i)
    c.vertex_error = std::max(c.vertex_error, (g.map(ref[i]) - pts[g.perm[i]]).norm() / g.h_T);
  c.params_ok = shear_constraints_hold(g);
  for (int i = 0; i < d; ++i) {
    if (std::abs(g.r[i].norm() - 1) > 1e-14) c.directions_ok = false;
    int from = g.perm[0], to = g.perm[i + 1];
    if (d == 3 && i == 1 && g.cond == CondTag::Cond2_3D_Type2) from = g.perm[1];
    Vec edge = pts[to] - pts[from];
    if ((g.h(i) * g.r[i] - edge).norm() > 1e-14 * g.h(i) * 4) c.directions_ok = false;
  }
  return c;
}

std::vector<double> directional_seminorm(const Simplex& T, const ElementGeometry& geo, const VectorField& grad_v,
                                         double p, int quad_degree) {
  const int d = T.dim();
  std::vector<double> acc(d, 0.0);
  for (const CellPoint& qp : cell_points(T, quad_degree)) {
    Vec g = grad_v(qp.x);
    for (int i = 0; i < d; ++i) acc[i] += qp.w * std::pow(std::abs(geo.r[i].dot(g)), p);
  }
  for (double& a : acc) a = std::pow(a, 1 / p);
  return acc;
}

}  // namespace aniso
