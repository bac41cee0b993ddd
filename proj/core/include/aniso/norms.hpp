#pragma once

#include "aniso/fe_spaces.hpp"
#include "aniso/projections.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace aniso {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Face weights omega_{T+-,F} and penalties kappa_{p,F*} for a fixed p.
/// Boundary faces carry omega = (1, 0).
struct FaceWeights {
  double p = 2;
  double p_dual = 2;  // p / (p - 1), infinite for p = 1
  std::vector<double> omega_plus, omega_minus;
  std::vector<double> kappa;
};

/// omega_i = l_i^{(p-1)/p} / (l_+^{(p-1)/p} + l_-^{(p-1)/p});
/// kappa = (l_+^{(p-1)/p} + l_-^{(p-1)/p})^{-p} inside, l^{1-p} on the boundary.
FaceWeights build_face_weights(const Triangulation& tri, double p);

/// (sum_T int_T |f|^q)^{1/q}. For RT0 functions |f| is the Euclidean norm.
/// degree < 0 picks q for even integer q (exact for P1) and 8 otherwise.
double lq_norm(const FeFunction& f, double q, int degree = -1);
double lq_norm(const Triangulation& tri, const ScalarField& f, double q, int degree = kDefaultQuadDegree);
/// (sum_T ||grad f||_{L^p(T)}^p)^{1/p}.
double broken_seminorm(const FeFunction& f, double p);
/// Pi_F^0 [[f]]: difference of the trace means, the single trace mean on the boundary.
double face_jump_mean(const FeFunction& f, int face);
/// Pi_F^0 [[.]] as a linear functional: (dof, coefficient) pairs.
std::vector<std::pair<int, double>> face_jump_coefficients(const DofMap& dofs, int face);
/// (sum_F kappa_F ||Pi_F^0 [[f]]||_{L^p(F)}^p)^{1/p}, using weights.p.
double jump_seminorm(const FeFunction& f, const FaceWeights& w);
double vh_norm(const FeFunction& f, const FaceWeights& w);

/// Traces on one side of a face: value at element barycentric coordinates.
using PiecewiseScalar = std::function<double(int e, const Bary& lambda)>;
using PiecewiseVector = std::function<Vec(int e, const Bary& lambda)>;

/// [[(v phi) . n]] - ({{v}}_w . n [[phi]] + [[v . n]] {{phi}}_wbar) at one
/// point. On a boundary face pass interior = false; the exterior trace is
/// zero and the weights are (1, 0), so the identity reads
/// (v phi) . n = (v . n) phi.
double jump_product_defect(const Vec& n, double omega_plus, double omega_minus, const Vec& v_plus,
                           const Vec& v_minus, double phi_plus, double phi_minus, bool interior);
/// Max of |jump_product_defect| over the quadrature points of a face.
double jump_product_residual(const Triangulation& tri, int face, const FaceWeights& w, const PiecewiseVector& v,
                             const PiecewiseScalar& phi, int degree = 4);

/// ||v||_{L^p(F)} / (l^{-1/p} (||v||_{L^p(T)} + h_T^{1/p} ||v||^{1-1/p} |v|_{W^{1,p}(T)}^{1/p}))
/// for the face opposite local vertex `face`.
double trace_ratio(const Simplex& T, int face, const SmoothScalar& v, double p, int degree = kDefaultQuadDegree);

/// Bilinear forms of the discrete integration by parts between RT0 (rows)
/// and a scalar space (columns):
///   volume(i, j) = int (tau_i . grad_h psi_j + div tau_i psi_j),
///   face(i, j)   = sum_F int_F {{tau_i}}_w . n_F Pi_F^0 [[psi_j]]
///                  (tau . n_F and Pi_F^0 psi on boundary faces).
/// magnitude(i, j) is the same sum with every product replaced by the
/// product of pointwise norms; it sets the rounding scale of each pair.
struct IbpForms {
  SparseMatrix volume, face, magnitude;
  /// max over stored entries of |volume - face| / magnitude.
  double max_relative_residual() const;
};
IbpForms ibp_forms(const DofMap& rt, const DofMap& psi, const FaceWeights& w);

struct IbpResidual {
  double residual = 0;
  double scale = 0;
};
IbpResidual ibp_residual(const FeFunction& tau, const FeFunction& psi, const FaceWeights& w);

/// |sum_{F interior} int_F {{w}}_omega . n Pi_F^0 [[psi]]| / (|psi|_{p,J} ||w||_{W^{1,p'}}).
double face_coupling_ratio(const FeFunction& psi, const FaceWeights& weights, const SmoothVector& w,
                           int degree = kDefaultQuadDegree);

/// L^2 mass matrix of a scalar space.
SparseMatrix mass_matrix(const DofMap& dofs);
/// Gram matrix of |.|_{2,V_h}^2; requires weights.p == 2.
SparseMatrix energy_matrix(const DofMap& dofs, const FaceWeights& w);

}  // namespace aniso
