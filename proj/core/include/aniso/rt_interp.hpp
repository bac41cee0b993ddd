#pragma once

#include "aniso/fe_spaces.hpp"
#include "aniso/projections.hpp"

namespace aniso {

/// Global RT interpolant: the coefficient of face F is int_F v . n_F.
FeFunction rt_interpolate(std::shared_ptr<const DofMap> rt, const VectorField& v, int degree = kDefaultQuadDegree);

/// Outward fluxes of v through the faces of T; these are the coefficients
/// of I_T v in the local basis with sign +1.
Bary rt_local_fluxes(const Simplex& T, const VectorField& v, int degree = kDefaultQuadDegree);
Vec rt_local_value(const Simplex& T, const Bary& fluxes, const Bary& lambda);

struct CommutingCheck {
  double residual = 0;  // max_T |div I_T v - Pi_T^0 div v|
  double div_max = 0;   // max |div v| over the quadrature points
  int argmax = -1;
};
CommutingCheck commuting_residual(const std::shared_ptr<const Triangulation>& tri, const SmoothVector& v, int degree = kDefaultQuadDegree);

/// ||v||_{L^p}^p and |v|_{W^{1,p}}^p over T with Euclidean / Frobenius
/// pointwise norms.
double vector_lp_power(const Simplex& T, const VectorField& v, double p, int degree = kDefaultQuadDegree);
double jacobian_lp_power(const Simplex& T, const MatrixField& jac, double p, int degree = kDefaultQuadDegree);

/// ||I_h v||_{L^p} / ||v||_{W^{1,p}}. Throws UndefinedRatio for v = 0.
double rt_stability_ratio(const std::shared_ptr<const Triangulation>& tri, const SmoothVector& v, double p, int degree = kDefaultQuadDegree);

/// ||I_T v - v||_{L^p(T)} divided by
///   (H_T/h_T) sum_i h_i ||dv/dr_i||_{L^p} + h_T ||div v||_{L^p}   (Condition 1, Type i)
///   H_T |v|_{W^{1,p}}                                            (Type ii).
/// Returns 0 when I_T v = v up to rounding; throws UndefinedRatio when only
/// the denominator vanishes.
double rt_error_ratio(const Simplex& T, const ElementGeometry& geo, const SmoothVector& v, double p,
                      int degree = kDefaultQuadDegree);

}  // namespace aniso
