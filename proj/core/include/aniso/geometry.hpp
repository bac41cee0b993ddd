#pragma once

#include "aniso/mesh.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace aniso {

enum class CondTag { Cond1_2D, Cond2_3D_Type1, Cond2_3D_Type2 };

std::string to_string(CondTag tag);

/// Shear parameters of A~: (s, t) in 2D, (s1, t1, s21, s22, t2) in 3D.
struct ShearParams {
  double s = 0, t = 0;
  double s21 = 0, s22 = 0, t2 = 0;
};

/// Two-step decomposition x = A_T A~ A^ x^ + b_T of one element.
struct ElementGeometry {
  int dim = 2;
  CondTag cond = CondTag::Cond1_2D;
  /// perm[k] = local vertex index of p_{k+1}.
  std::array<int, 4> perm{0, 1, 2, 3};
  Vec h;             // h_1..h_d
  double h_T = 0;    // diameter
  double H_T = 0;
  double gamma = 0;  // H_T / h_T
  double volume = 0;
  Mat A_hat;
  Mat A_tilde;
  Mat A_rot;
  Vec b;
  ShearParams shear;
  std::array<Vec, 3> r;           // unit directions r_1..r_d
  std::array<double, 4> ell{};    // l_{T,F} for the face opposite local vertex i

  Mat A() const { return A_rot * A_tilde * A_hat; }
  Vec map(const Vec& x_hat) const { return A() * x_hat + b; }
  Vec inverse_map(const Vec& x) const;
  /// Vertices of the reference element selected by the condition tag.
  std::vector<Vec> reference_vertices() const;
};

std::vector<Vec> reference_vertices(int dim, CondTag cond);

/// Condition 1 decomposition. `ids` are global vertex ids used for tie
/// breaking; defaults to 0..2.
ElementGeometry decompose_2d(std::span<const Vec> pts, std::span<const int> ids = {});
/// Condition 2 decomposition with Type i / Type ii classification.
ElementGeometry decompose_3d(std::span<const Vec> pts, std::span<const int> ids = {});
ElementGeometry decompose(std::span<const Vec> pts, std::span<const int> ids = {});
std::vector<ElementGeometry> decompose_mesh(const SimplicialMesh& mesh);

struct SemiRegularity {
  std::vector<double> gamma;
  double max = 0;
  int argmax = -1;
};
SemiRegularity semi_regularity(const std::vector<ElementGeometry>& geo);
SemiRegularity semi_regularity(const SimplicialMesh& mesh);

/// Largest singular value: closed form for 2x2, Jacobi SVD otherwise.
double spectral_norm(const Mat& a);
/// ||A||_2 ||A^{-1}||_2.
double condition_number(const Mat& a);

/// Matrix bound quantities for one element.
struct BoundsCheck {
  double det_rel_error = 0;    // | |det(A~ A^)| - d!|T| | / d!|T|
  double tilde_norm = 0;       // ||A~||_2
  double tilde_norm_bound = 0; // sqrt 2 or 2
  double tilde_cond = 0;       // ||A~|| ||A~^{-1}||
  double tilde_cond_bound = 0; // H_T/h_T or (2/3) H_T/h_T
  double hat_norm = 0;         // ||A^||_2
  double rot_norm_error = 0;   // max(| ||A_T|| - 1 |, | ||A_T^{-1}|| - 1 |)
  double vertex_error = 0;     // max_i |Phi(p^_i) - p_perm(i)| / h_T
  bool params_ok = true;       // sign and size constraints on the shear parameters
  bool directions_ok = true;   // |r_i| = 1 and h_i r_i reproduces the edge vectors

  bool pass() const;
};
BoundsCheck check_bounds(const ElementGeometry& geo, std::span<const Vec> pts);

/// ||dv/dr_i||_{L^p(T)} for i = 1..d.
std::vector<double> directional_seminorm(const Simplex& T, const ElementGeometry& geo, const VectorField& grad_v,
                                         double p, int quad_degree);

}  // namespace aniso
