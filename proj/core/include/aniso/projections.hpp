#pragma once

#include "aniso/fe_spaces.hpp"
#include "aniso/geometry.hpp"

#include <vector>

namespace aniso {

constexpr int kDefaultQuadDegree = 8;

/// Per-element constants.
using P0Field = std::vector<double>;

/// (1/|T|) int_T f.
double cell_mean(const Simplex& T, const ScalarField& f, int degree = kDefaultQuadDegree);
double cell_mean(const FeFunction& f, int e);
/// (1/|F|) int_F g over a face of the triangulation.
double face_mean(const Triangulation& tri, int face, const ScalarField& g, int degree = kDefaultQuadDegree);
/// Trace mean of f over `face` taken from element e (one of its owners).
double face_mean(const FeFunction& f, int face, int e);

/// Pi_h^0 f.
P0Field project_p0(const Triangulation& tri, const ScalarField& f, int degree = kDefaultQuadDegree);

/// ||f||_{L^q(T)} by quadrature.
double element_lq_norm(const Simplex& T, const ScalarField& f, double q, int degree = kDefaultQuadDegree);

/// ||Pi_T^0 v - v||_{L^q(T)} / (|T|^{1/q - 1/p} sum_i h_i ||dv/dr_i||_{L^p(T)}).
/// Returns 0 when the numerator vanishes (constant v) and throws
/// UndefinedRatio when only the denominator does. Throws PreconditionError
/// unless 1 - d/p >= -d/q.
double projection_error_ratio(const Simplex& T, const ElementGeometry& geo, const SmoothScalar& v, double p,
                              double q, int degree = kDefaultQuadDegree);

}  // namespace aniso
