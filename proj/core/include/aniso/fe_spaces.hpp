#pragma once

#include "aniso/geometry.hpp"
#include "aniso/mesh.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace aniso {

enum class SpaceTag { DCCR, CR, CR0, RT0, P0, DC1 };

std::string to_string(SpaceTag tag);
/// Case-insensitive: dccr, cr, cr0, rt0, p0, dc1.
SpaceTag parse_space(std::string_view name);

/// Global numbering of a lowest-order space.
///
/// CR and RT0 carry one dof per face; CR0 drops the boundary faces; DCCR
/// and DC1 carry d+1 element-local dofs; P0 one per element. A local dof
/// of -1 is constrained to zero.
struct DofMap {
  SpaceTag tag = SpaceTag::DCCR;
  std::shared_ptr<const Triangulation> tri;
  int n_dofs = 0;
  int local_size = 0;
  std::vector<std::array<int, 4>> cell_dofs;
  /// RT0: +1 when the element is T+ (or owns a boundary face), -1 on T-.
  std::vector<std::array<double, 4>> cell_signs;
  /// CR, CR0, RT0: dof of each face, -1 when constrained.
  std::vector<int> face_dof;
  /// CR0: boundary faces whose dof is removed.
  std::vector<int> constrained_faces;

  int dim() const { return tri->dim(); }
  bool vector_valued() const { return tag == SpaceTag::RT0; }
};

DofMap build_dofs(std::shared_ptr<const Triangulation> tri, SpaceTag tag);

/// Function of element barycentric coordinates, used where the physical
/// point would lose accuracy on thin elements.
using LocalField = std::function<double(const Bary&)>;

/// theta_i = 1 - d lambda_i.
double eval_cr_basis(const Simplex& T, int i, const Bary& lambda);
double eval_cr_basis(const Simplex& T, int i, const Vec& x);
Vec cr_basis_gradient(const Simplex& T, int i);
/// Mean of q over the face opposite vertex i.
double apply_cr_dof(const Simplex& T, int i, const ScalarField& q, int degree = 8);
double apply_cr_dof_local(const Simplex& T, int i, const LocalField& q, int degree = 8);

/// sign (x - p_i) / (d |T|).
Vec eval_rt_basis(const Simplex& T, int i, const Bary& lambda, double sign = 1);
Vec eval_rt_basis(const Simplex& T, int i, const Vec& x, double sign = 1);
/// theta_i . n_j with n_j the outward normal of face j.
double rt_basis_normal(const Simplex& T, int i, const Bary& lambda, int j, double sign = 1);
double rt_basis_divergence(const Simplex& T, double sign = 1);
/// Outward flux of v through the face opposite vertex j.
double apply_rt_dof(const Simplex& T, int j, const VectorField& v, int degree = 8);

/// Local shape functions of a scalar space (DCCR/CR/CR0, DC1 or P0).
Bary local_values(SpaceTag tag, const Simplex& T, const Bary& lambda);
std::array<Vec, 4> local_gradients(SpaceTag tag, const Simplex& T);
/// Face means of the local shape functions over the face opposite vertex i.
Bary local_face_means(SpaceTag tag, int dim, int i);
int local_size(SpaceTag tag, int dim);

/// v(x) = A v^(Phi^{-1} x) / det A with A = A_T A~ A^.
VectorField piola_push(const ElementGeometry& geo, VectorField v_hat);

class FeFunction {
 public:
  FeFunction(std::shared_ptr<const DofMap> dofs, Eigen::VectorXd coeffs);
  explicit FeFunction(std::shared_ptr<const DofMap> dofs);

  const DofMap& dofs() const { return *dofs_; }
  std::shared_ptr<const DofMap> dofs_ptr() const { return dofs_; }
  const Triangulation& tri() const { return *dofs_->tri; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }

  /// Coefficients of the local shape functions on element e.
  Bary local_coefficients(int e) const;

  double value(int e, const Bary& lambda) const;
  Vec gradient(int e) const;
  /// Trace mean over the face opposite local vertex i.
  double face_mean(int e, int i) const;

  Vec vector_value(int e, const Bary& lambda) const;
  /// v . n_j (outward) on element e.
  double normal_component(int e, const Bary& lambda, int j) const;
  double divergence(int e) const;

 private:
  std::shared_ptr<const DofMap> dofs_;
  Eigen::VectorXd coeffs_;
};

/// Nodal interpolation into a scalar space: face means (CR family),
/// vertex values (DC1) or cell means (P0).
FeFunction interpolate(std::shared_ptr<const DofMap> dofs, const ScalarField& f, int degree = 8);

/// Re-expresses a function in a larger space with the same local basis
/// (CR0 -> CR -> DCCR).
FeFunction embed(const FeFunction& f, std::shared_ptr<const DofMap> target);

}  // namespace aniso
