#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's geometry or quadrature code.

#include <aniso/mesh.hpp>

#include <array>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using aniso::Vec;

/// Exact integral of x^a y^b z^c over the unit reference d-simplex.
double monomial_integral(int d, std::array<int, 3> exps);

/// Random simplex: random reference shape, axis scales log-uniform in
/// [1/max_aspect, 1], random orthogonal map (mirrors included), random shift.
std::vector<Vec> random_simplex(std::mt19937_64& rng, int d, double max_aspect);

/// Ratio of longest to shortest edge.
double edge_aspect(const std::vector<Vec>& pts);

/// All (d-1)-subsimplices by brute force: sorted vertex tuples with their
/// multiplicity.
std::vector<std::pair<std::vector<int>, int>> enumerate_faces(const aniso::SimplicialMesh& mesh);

/// Vertex-to-hyperplane distance in 128-bit arithmetic where available.
double point_face_distance(const Vec& p, const std::vector<Vec>& face);

/// Area/volume via the shoelace / triple product formula, 128-bit.
double simplex_volume(const std::vector<Vec>& pts);

aniso::SimplicialMesh unit_square_two_triangles();
aniso::SimplicialMesh reference_triangle();
aniso::SimplicialMesh reference_tet();
/// Kuhn subdivision of the unit cube into 6 tetrahedra.
aniso::SimplicialMesh kuhn_cube();
/// Nx x Ny grid of the unit square, each cell split along the same diagonal.
aniso::SimplicialMesh grid_2d(int nx, int ny, double lx = 1.0, double ly = 1.0);

/// Dense symmetric generalized eigenvalues of (M, A), ascending.
std::vector<double> dense_generalized_eigenvalues(const Eigen::MatrixXd& m, const Eigen::MatrixXd& a);

}  // namespace oracle
