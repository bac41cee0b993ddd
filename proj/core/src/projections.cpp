#include "aniso/projections.hpp"

#include "aniso/quadrature.hpp"

#include <cmath>
#include <limits>

namespace aniso {

double cell_mean(const Simplex& T, const ScalarField& f, int degree) {
  double acc = 0;
  for (const auto& p : cell_points(T, degree)) acc += p.w * f(p.x);
  return acc / T.volume();
}

double cell_mean(const FeFunction& f, int e) {
  const int d = f.tri().dim();
  return f.value(e, Bary::Constant(d + 1, 1.0 / (d + 1)));
}

double face_mean(const Triangulation& tri, int face, const ScalarField& g, int degree) {
  double acc = 0;
  for (const auto& p : face_points(tri, face, degree)) acc += p.w * g(p.x);
  return acc / tri.face(face).measure;
}

double face_mean(const FeFunction& f, int face, int e) {
  const Face& F = f.tri().face(face);
  int local = e == F.plus ? F.plus_local : e == F.minus ? F.minus_local : -1;
  if (local < 0) throw PreconditionError("face_mean: element " + std::to_string(e) + " does not own face " +
                                         std::to_string(face));
  return f.face_mean(e, local);
}

P0Field project_p0(const Triangulation& tri, const ScalarField& f, int degree) {
  P0Field out(tri.num_cells());
  for (int e = 0; e < tri.num_cells(); ++e) out[e] = cell_mean(tri.cell(e), f, degree);
  return out;
}

double element_lq_norm(const Simplex& T, const ScalarField& f, double q, int degree) {
  double acc = 0;
  for (const auto& p : cell_points(T, degree)) acc += p.w * std::pow(std::abs(f(p.x)), q);
  return std::pow(acc, 1.0 / q);
}

double projection_error_ratio(const Simplex& T, const ElementGeometry& geo, const SmoothScalar& v, double p,
                              double q, int degree) {
  const int d = T.dim();
  if (!(p >= 1 && q >= 1) || 1.0 - d / p < -d / q - 1e-14)
    throw PreconditionError("projection_error_ratio: (q, p) = (" + std::to_string(q) + ", " + std::to_string(p) +
                            ") is not an admissible embedding pair");
  const double mean = cell_mean(T, v.value, degree);
  const double num = element_lq_norm(T, [&](const Vec& x) { return v.value(x) - mean; }, q, degree);
  // Constant v: the numerator is rounding noise of the mean.
  if (num <= 64 * std::numeric_limits<double>::epsilon() * element_lq_norm(T, v.value, q, degree)) return 0;
  auto dir = directional_seminorm(T, geo, v.gradient, p, degree);
  double den = 0;
  for (int i = 0; i < d; ++i) den += geo.h(i) * dir[i];
  den *= std::pow(T.volume(), 1.0 / q - 1.0 / p);
  if (den == 0) throw UndefinedRatio("projection_error_ratio: vanishing directional derivatives");
  return num / den;
}

}  // namespace aniso
