#include "aniso/norms.hpp"

#include "aniso/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aniso {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void require_scalar(const DofMap& dofs, const char* who) {
  if (dofs.vector_valued()) throw PreconditionError(std::string(who) + ": scalar space expected, got RT0");
}

}  // namespace

std::vector<std::pair<int, double>> face_jump_coefficients(const DofMap& dofs, int face) {
  const Triangulation& tri = *dofs.tri;
  const Face& F = tri.face(face);
  std::vector<std::pair<int, double>> out;
  auto add = [&](int e, int local, double side) {
    Bary m = local_face_means(dofs.tag, tri.dim(), local);
    for (int i = 0; i < dofs.local_size; ++i) {
      int g = dofs.cell_dofs[e][i];
      if (g < 0 || m(i) == 0) continue;
      double c = side * m(i) * dofs.cell_signs[e][i];
      auto it = std::find_if(out.begin(), out.end(), [g](const auto& p) { return p.first == g; });
      if (it == out.end())
        out.emplace_back(g, c);
      else
        it->second += c;
    }
  };
  add(F.plus, F.plus_local, 1.0);
  if (F.interior()) add(F.minus, F.minus_local, -1.0);
  return out;
}

FaceWeights build_face_weights(const Triangulation& tri, double p) {
  if (!(p >= 1) || !std::isfinite(p)) throw PreconditionError("build_face_weights: p must lie in [1, inf)");
  FaceWeights w;
  w.p = p;
  w.p_dual = p == 1 ? std::numeric_limits<double>::infinity() : p / (p - 1);
  const double a = (p - 1) / p;
  const int nf = tri.num_faces();
  w.omega_plus.resize(nf);
  w.omega_minus.resize(nf);
  w.kappa.resize(nf);
  for (int f = 0; f < nf; ++f) {
    const Face& F = tri.face(f);
    const double lp = tri.cell(F.plus).height(F.plus_local);
    if (F.interior()) {
      const double lm = tri.cell(F.minus).height(F.minus_local);
      const double sp = std::pow(lp, a), sm = std::pow(lm, a), s = sp + sm;
      w.omega_plus[f] = sp / s;
      w.omega_minus[f] = sm / s;
      w.kappa[f] = std::pow(s, -p);
    } else {
      w.omega_plus[f] = 1;
      w.omega_minus[f] = 0;
      w.kappa[f] = std::pow(lp, 1 - p);
    }
  }
  return w;
}

double lq_norm(const FeFunction& f, double q, int degree) {
  if (degree < 0) {
    const bool even = q == std::floor(q) && static_cast<int>(q) % 2 == 0 && q <= kMaxQuadDegree;
    degree = even ? static_cast<int>(q) : kDefaultQuadDegree;
  }
  const Triangulation& tri = f.tri();
  const bool vec = f.dofs().vector_valued();
  double acc = 0;
  for (int e = 0; e < tri.num_cells(); ++e)
    for (const auto& p : cell_points(tri.cell(e), degree)) {
      double v = vec ? f.vector_value(e, p.bary).norm() : std::abs(f.value(e, p.bary));
      acc += p.w * std::pow(v, q);
    }
  return std::pow(acc, 1.0 / q);
}

double lq_norm(const Triangulation& tri, const ScalarField& f, double q, int degree) {
  double acc = 0;
  for (int e = 0; e < tri.num_cells(); ++e)
    for (const auto& p : cell_points(tri.cell(e), degree)) acc += p.w * std::pow(std::abs(f(p.x)), q);
  return std::pow(acc, 1.0 / q);
}

double broken_seminorm(const FeFunction& f, double p) {
  require_scalar(f.dofs(), "broken_seminorm");
  double acc = 0;
  for (int e = 0; e < f.tri().num_cells(); ++e) acc += f.tri().cell(e).volume() * std::pow(f.gradient(e).norm(), p);
  return std::pow(acc, 1.0 / p);
}

double face_jump_mean(const FeFunction& f, int face) {
  const Face& F = f.tri().face(face);
  double m = f.face_mean(F.plus, F.plus_local);
  if (F.interior()) m -= f.face_mean(F.minus, F.minus_local);
  return m;
}

double jump_seminorm(const FeFunction& f, const FaceWeights& w) {
  require_scalar(f.dofs(), "jump_seminorm");
  double acc = 0;
  for (int face = 0; face < f.tri().num_faces(); ++face)
    acc += w.kappa[face] * f.tri().face(face).measure * std::pow(std::abs(face_jump_mean(f, face)), w.p);
  return std::pow(acc, 1.0 / w.p);
}

double vh_norm(const FeFunction& f, const FaceWeights& w) {
  return std::pow(std::pow(broken_seminorm(f, w.p), w.p) + std::pow(jump_seminorm(f, w), w.p), 1.0 / w.p);
}

double jump_product_defect(const Vec& n, double omega_plus, double omega_minus, const Vec& v_plus,
                           const Vec& v_minus, double phi_plus, double phi_minus, bool interior) {
  Vec vm = interior ? v_minus : Vec::Zero(n.size());
  double fm = interior ? phi_minus : 0.0;
  double wp = interior ? omega_plus : 1.0, wm = interior ? omega_minus : 0.0;
  double lhs = (v_plus * phi_plus - vm * fm).dot(n);
  double avg_v = (wp * v_plus + wm * vm).dot(n);
  double jump_phi = phi_plus - fm;
  double jump_vn = v_plus.dot(n) - vm.dot(n);
  double avg_phi = wm * phi_plus + wp * fm;
  return lhs - (avg_v * jump_phi + jump_vn * avg_phi);
}

double jump_product_residual(const Triangulation& tri, int face, const FaceWeights& w, const PiecewiseVector& v,
                             const PiecewiseScalar& phi, int degree) {
  const Face& F = tri.face(face);
  double worst = 0;
  for (const auto& p : face_points(tri, face, degree)) {
    Bary bp = face_point_bary(tri.mesh, F.plus, F, p.mu);
    Vec vp = v(F.plus, bp), vm = Vec::Zero(tri.dim());
    double fp = phi(F.plus, bp), fm = 0;
    if (F.interior()) {
      Bary bm = face_point_bary(tri.mesh, F.minus, F, p.mu);
      vm = v(F.minus, bm);
      fm = phi(F.minus, bm);
    }
    double r = jump_product_defect(F.normal, w.omega_plus[face], w.omega_minus[face], vp, vm, fp, fm, F.interior());
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double trace_ratio(const Simplex& T, int face, const SmoothScalar& v, double p, int degree) {
  double lhs = 0;
  for (const auto& q : local_face_points(T, face, degree)) lhs += q.w * std::pow(std::abs(v.value(q.x)), p);
  lhs = std::pow(lhs, 1.0 / p);
  double vol = 0, grad = 0;
  for (const auto& q : cell_points(T, degree)) {
    vol += q.w * std::pow(std::abs(v.value(q.x)), p);
    grad += q.w * std::pow(v.gradient(q.x).norm(), p);
  }
  vol = std::pow(vol, 1.0 / p);
  grad = std::pow(grad, 1.0 / p);
  double den = std::pow(T.height(face), -1.0 / p) *
               (vol + std::pow(T.diameter(), 1.0 / p) * std::pow(vol, 1 - 1.0 / p) * std::pow(grad, 1.0 / p));
  if (den == 0) throw UndefinedRatio("trace_ratio: v vanishes on the element");
  return lhs / den;
}

double IbpForms::max_relative_residual() const {
  SparseMatrix diff = volume - face;
  double worst = 0;
  for (int k = 0; k < magnitude.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(magnitude, k); it; ++it) {
      double r = std::abs(diff.coeff(it.row(), it.col()));
      if (it.value() > 0) worst = std::max(worst, r / it.value());
    }
  return worst;
}

IbpForms ibp_forms(const DofMap& rt, const DofMap& psi, const FaceWeights& w) {
  if (rt.tag != SpaceTag::RT0) throw PreconditionError("ibp_forms: first space must be RT0");
  require_scalar(psi, "ibp_forms");
  if (rt.tri != psi.tri) throw PreconditionError("ibp_forms: spaces live on different meshes");
  const Triangulation& tri = *rt.tri;
  const int d = tri.dim();
  Triplets vol, fac, mag;
  for (int e = 0; e < tri.num_cells(); ++e) {
    const Simplex& T = tri.cell(e);
    auto grads = local_gradients(psi.tag, T);
    auto pts = cell_points(T, 2);
    for (int i = 0; i <= d; ++i) {
      int gi = rt.cell_dofs[e][i];
      double si = rt.cell_signs[e][i];
      double div = rt_basis_divergence(T, si);
      for (int j = 0; j < psi.local_size; ++j) {
        int gj = psi.cell_dofs[e][j];
        if (gj < 0) continue;
        double sum = 0, abs_sum = 0;
        for (const auto& p : pts) {
          Vec th = eval_rt_basis(T, i, p.bary, si);
          double v = local_values(psi.tag, T, p.bary)(j);
          sum += p.w * (th.dot(grads[j]) + div * v);
          abs_sum += p.w * (th.norm() * grads[j].norm() + std::abs(div * v));
        }
        vol.emplace_back(gi, gj, sum);
        mag.emplace_back(gi, gj, abs_sum);
      }
    }
  }
  for (int f = 0; f < tri.num_faces(); ++f) {
    const Face& F = tri.face(f);
    const int sides = F.interior() ? 2 : 1;
    auto pts = face_points(tri, f, 2);
    for (int s = 0; s < sides; ++s) {
      const int es = s == 0 ? F.plus : F.minus;
      const int ls = s == 0 ? F.plus_local : F.minus_local;
      const double omega = s == 0 ? w.omega_plus[f] : w.omega_minus[f];
      const Simplex& T = tri.cell(es);
      const double orient = tri.faces.orientation(es, ls);
      for (int i = 0; i <= d; ++i) {
        int gi = rt.cell_dofs[es][i];
        double si = rt.cell_signs[es][i];
        double flux = 0, size = 0;  // int_F omega tau_i . n_F and int_F omega |tau_i|
        for (const auto& p : pts) {
          Bary b = face_point_bary(tri.mesh, es, F, p.mu);
          flux += p.w * omega * orient * rt_basis_normal(T, i, b, ls, si);
          size += p.w * omega * eval_rt_basis(T, i, b).norm();
        }
        for (int t = 0; t < sides; ++t) {
          const int et = t == 0 ? F.plus : F.minus;
          const int lt = t == 0 ? F.plus_local : F.minus_local;
          Bary means = local_face_means(psi.tag, d, lt);
          for (int j = 0; j < psi.local_size; ++j) {
            int gj = psi.cell_dofs[et][j];
            if (gj < 0) continue;
            double c = flux * (t == 0 ? 1.0 : -1.0) * means(j) * psi.cell_signs[et][j];
            fac.emplace_back(gi, gj, c);
            mag.emplace_back(gi, gj, size * std::abs(means(j)));
          }
        }
      }
    }
  }
  IbpForms out;
  out.volume = from_triplets(rt.n_dofs, psi.n_dofs, vol);
  out.face = from_triplets(rt.n_dofs, psi.n_dofs, fac);
  out.magnitude = from_triplets(rt.n_dofs, psi.n_dofs, mag);
  return out;
}

IbpResidual ibp_residual(const FeFunction& tau, const FeFunction& psi, const FaceWeights& w) {
  IbpForms f = ibp_forms(tau.dofs(), psi.dofs(), w);
  IbpResidual r;
  r.residual = std::abs(tau.coeffs().dot((f.volume - f.face) * psi.coeffs()));
  r.scale = tau.coeffs().cwiseAbs().dot(f.magnitude * psi.coeffs().cwiseAbs());
  return r;
}

double face_coupling_ratio(const FeFunction& psi, const FaceWeights& weights, const SmoothVector& w, int degree) {
  const Triangulation& tri = psi.tri();
  double coupling = 0;
  for (int f = 0; f < tri.num_faces(); ++f) {
    const Face& F = tri.face(f);
    if (!F.interior()) continue;
    double jump = face_jump_mean(psi, f);
    double flux = 0;
    for (const auto& p : face_points(tri, f, degree)) flux += p.w * w.value(p.x).dot(F.normal);
    coupling += flux * jump;
  }
  const double pd = weights.p_dual;
  double wn = 0;
  for (int e = 0; e < tri.num_cells(); ++e)
    for (const auto& p : cell_points(tri.cell(e), degree))
      wn += p.w * (std::pow(w.value(p.x).norm(), pd) + std::pow(w.jacobian(p.x).norm(), pd));
  wn = std::pow(wn, 1.0 / pd);
  double den = jump_seminorm(psi, weights) * wn;
  if (den == 0) {
    if (coupling == 0) return 0;
    throw UndefinedRatio("face_coupling_ratio: vanishing jump seminorm");
  }
  return std::abs(coupling) / den;
}

SparseMatrix mass_matrix(const DofMap& dofs) {
  require_scalar(dofs, "mass_matrix");
  const Triangulation& tri = *dofs.tri;
  Triplets t;
  for (int e = 0; e < tri.num_cells(); ++e) {
    const Simplex& T = tri.cell(e);
    Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
    for (const auto& p : cell_points(T, 2)) {
      Bary v = local_values(dofs.tag, T, p.bary);
      for (int i = 0; i < dofs.local_size; ++i)
        for (int j = 0; j < dofs.local_size; ++j) local(i, j) += p.w * v(i) * v(j);
    }
    for (int i = 0; i < dofs.local_size; ++i)
      for (int j = 0; j < dofs.local_size; ++j) {
        int gi = dofs.cell_dofs[e][i], gj = dofs.cell_dofs[e][j];
        if (gi >= 0 && gj >= 0) t.emplace_back(gi, gj, local(i, j));
      }
  }
  return from_triplets(dofs.n_dofs, dofs.n_dofs, t);
}

SparseMatrix energy_matrix(const DofMap& dofs, const FaceWeights& w) {
  require_scalar(dofs, "energy_matrix");
  if (w.p != 2) throw PreconditionError("energy_matrix: weights must be built for p = 2");
  const Triangulation& tri = *dofs.tri;
  Triplets t;
  for (int e = 0; e < tri.num_cells(); ++e) {
    const Simplex& T = tri.cell(e);
    auto g = local_gradients(dofs.tag, T);
    for (int i = 0; i < dofs.local_size; ++i)
      for (int j = 0; j < dofs.local_size; ++j) {
        int gi = dofs.cell_dofs[e][i], gj = dofs.cell_dofs[e][j];
        if (gi >= 0 && gj >= 0) t.emplace_back(gi, gj, T.volume() * g[i].dot(g[j]));
      }
  }
  for (int f = 0; f < tri.num_faces(); ++f) {
    auto jf = face_jump_coefficients(dofs, f);
    const double c = w.kappa[f] * tri.face(f).measure;
    for (const auto& [a, ca] : jf)
      for (const auto& [b, cb] : jf) t.emplace_back(a, b, c * ca * cb);
  }
  return from_triplets(dofs.n_dofs, dofs.n_dofs, t);
}

}  // namespace aniso
