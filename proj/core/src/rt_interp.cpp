#include "aniso/rt_interp.hpp"

#include "aniso/quadrature.hpp"

#include <cmath>
#include <limits>

namespace aniso {

FeFunction rt_interpolate(std::shared_ptr<const DofMap> rt, const VectorField& v, int degree) {
  if (rt->tag != SpaceTag::RT0) throw PreconditionError("rt_interpolate: dof map is " + to_string(rt->tag));
  const Triangulation& tri = *rt->tri;
  FeFunction out(rt);
  for (int f = 0; f < tri.num_faces(); ++f) {
    const Vec& n = tri.face(f).normal;
    double acc = 0;
    for (const auto& p : face_points(tri, f, degree)) acc += p.w * v(p.x).dot(n);
    out.coeffs()(rt->face_dof[f]) = acc;
  }
  return out;
}

Bary rt_local_fluxes(const Simplex& T, const VectorField& v, int degree) {
  Bary c(T.dim() + 1);
  for (int j = 0; j <= T.dim(); ++j) c(j) = apply_rt_dof(T, j, v, degree);
  return c;
}

Vec rt_local_value(const Simplex& T, const Bary& fluxes, const Bary& lambda) {
  Vec out = Vec::Zero(T.dim());
  for (int i = 0; i <= T.dim(); ++i) out += eval_rt_basis(T, i, lambda, fluxes(i));
  return out;
}

CommutingCheck commuting_residual(const std::shared_ptr<const Triangulation>& tri_ptr, const SmoothVector& v, int degree) {
  auto rt = std::make_shared<const DofMap>(build_dofs(tri_ptr, SpaceTag::RT0));
  const Triangulation& tri = *tri_ptr;
  FeFunction iv = rt_interpolate(rt, v.value, degree);
  CommutingCheck out;
  for (int e = 0; e < tri.num_cells(); ++e) {
    const Simplex& T = tri.cell(e);
    double acc = 0;
    for (const auto& p : cell_points(T, degree)) {
      double div = v.divergence(p.x);
      acc += p.w * div;
      out.div_max = std::max(out.div_max, std::abs(div));
    }
    double r = std::abs(iv.divergence(e) - acc / T.volume());
    if (r > out.residual || out.argmax < 0) {
      out.residual = r;
      out.argmax = e;
    }
  }
  return out;
}

double vector_lp_power(const Simplex& T, const VectorField& v, double p, int degree) {
  double acc = 0;
  for (const auto& q : cell_points(T, degree)) acc += q.w * std::pow(v(q.x).norm(), p);
  return acc;
}

double jacobian_lp_power(const Simplex& T, const MatrixField& jac, double p, int degree) {
  double acc = 0;
  for (const auto& q : cell_points(T, degree)) acc += q.w * std::pow(jac(q.x).norm(), p);
  return acc;
}

double rt_stability_ratio(const std::shared_ptr<const Triangulation>& tri_ptr, const SmoothVector& v, double p, int degree) {
  auto rt = std::make_shared<const DofMap>(build_dofs(tri_ptr, SpaceTag::RT0));
  const Triangulation& tri = *tri_ptr;
  FeFunction iv = rt_interpolate(rt, v.value, degree);
  double num = 0, den = 0;
  for (int e = 0; e < tri.num_cells(); ++e) {
    const Simplex& T = tri.cell(e);
    for (const auto& q : cell_points(T, degree)) num += q.w * std::pow(iv.vector_value(e, q.bary).norm(), p);
    den += vector_lp_power(T, v.value, p, degree) + jacobian_lp_power(T, v.jacobian, p, degree);
  }
  if (den == 0) throw UndefinedRatio("rt_stability_ratio: v vanishes");
  return std::pow(num / den, 1.0 / p);
}

double rt_error_ratio(const Simplex& T, const ElementGeometry& geo, const SmoothVector& v, double p, int degree) {
  Bary c = rt_local_fluxes(T, v.value, degree);
  double num = 0;
  for (const auto& q : cell_points(T, degree))
    num += q.w * std::pow((rt_local_value(T, c, q.bary) - v.value(q.x)).norm(), p);
  num = std::pow(num, 1.0 / p);
  // reproduction up to rounding (v in RT0)
  if (num <= 64 * std::numeric_limits<double>::epsilon() * std::pow(vector_lp_power(T, v.value, p, degree), 1.0 / p))
    return 0;
  double den = 0;
  if (geo.cond == CondTag::Cond2_3D_Type2) {
    den = geo.H_T * std::pow(jacobian_lp_power(T, v.jacobian, p, degree), 1.0 / p);
  } else {
    double dir = 0;
    for (int i = 0; i < T.dim(); ++i) {
      double acc = 0;
      for (const auto& q : cell_points(T, degree)) acc += q.w * std::pow((v.jacobian(q.x) * geo.r[i]).norm(), p);
      dir += geo.h(i) * std::pow(acc, 1.0 / p);
    }
    double div = 0;
    for (const auto& q : cell_points(T, degree)) div += q.w * std::pow(std::abs(v.divergence(q.x)), p);
    den = geo.gamma * dir + geo.h_T * std::pow(div, 1.0 / p);
  }
  if (den == 0) throw UndefinedRatio("rt_error_ratio: vanishing derivatives");
  return num / den;
}

}  // namespace aniso
