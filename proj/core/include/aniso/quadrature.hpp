#pragma once

#include "aniso/mesh.hpp"

#include <vector>

namespace aniso {

enum class QuadDomain { Simplex, Face };

/// Quadrature on the reference k-simplex, k = dim for a simplex rule and
/// dim-1 for a face rule. Points are barycentric (k+1 entries); weights sum
/// to 1/k!.
struct QuadRule {
  QuadDomain domain = QuadDomain::Simplex;
  int dim = 2;     // ambient simplex dimension d
  int degree = 1;  // exact for total degree <= degree
  std::vector<Bary> bary;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

constexpr int kMaxQuadDegree = 10;

/// Collapsed Gauss-Legendre rule on the reference d-simplex. Throws Error
/// for degree > kMaxQuadDegree.
const QuadRule& simplex_rule(int d, int degree);
/// Rule on the (d-1)-dimensional reference face of a d-simplex.
const QuadRule& face_rule(int d, int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct CellPoint {
  Bary bary;  // d+1 barycentric coordinates in the element
  Vec x;
  double w;  // physical weight
};

/// Rule pushed forward to a physical element.
std::vector<CellPoint> cell_points(const Simplex& s, int degree);
/// Face rule on the face of `s` opposite local vertex `face`; bary are
/// element barycentric coordinates (entry `face` is zero).
std::vector<CellPoint> local_face_points(const Simplex& s, int face, int degree);

struct FacePoint {
  std::array<double, 3> mu{};  // barycentric weights of Face::vertices
  Vec x;
  double w;
};

/// Rule pushed forward to a physical face of the triangulation.
std::vector<FacePoint> face_points(const Triangulation& tri, int face, int degree);

/// Barycentric coordinates in element e of a point given by weights of the
/// face vertices. Evaluating local bases from these avoids re-solving the
/// barycentric map on thin elements.
Bary face_point_bary(const SimplicialMesh& mesh, int e, const Face& face, const std::array<double, 3>& mu);

}  // namespace aniso
