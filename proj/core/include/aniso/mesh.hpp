#pragma once

#include "aniso/types.hpp"

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aniso {

/// Vertex indices of one element; only the first dim+1 entries are used.
using Cell = std::array<int, 4>;

/// Conforming simplicial mesh in two or three dimensions.
///
/// The element order is the stable global ordering that fixes the +/- side
/// of every interior face. Construction validates index ranges, positive
/// measure and conformity, and throws MeshError otherwise.
class SimplicialMesh {
 public:
  SimplicialMesh(int dim, std::vector<Vec> vertices, std::vector<Cell> cells);

  int dim() const { return dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }

  const Vec& vertex(int i) const { return vertices_[i]; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  std::span<const int> cell(int e) const { return {cells_[e].data(), static_cast<std::size_t>(dim_ + 1)}; }
  std::vector<Vec> cell_vertices(int e) const;

 private:
  int dim_;
  std::vector<Vec> vertices_;
  std::vector<Cell> cells_;
};

/// Reads the line-oriented mesh format:
///   dim d / vertices n + n coordinate lines / elements m + m index lines.
/// `#` starts a comment. Throws ParseError on malformed text and MeshError
/// on invalid meshes.
SimplicialMesh parse_mesh(std::string_view text);
SimplicialMesh read_mesh_file(const std::string& path);
std::string format_mesh(const SimplicialMesh& mesh);

/// Physical simplex with cached barycentric map. Geometry is evaluated in
/// extended precision so that heights of needles and slivers keep their
/// relative accuracy.
class Simplex {
 public:
  explicit Simplex(std::span<const Vec> vertices);

  int dim() const { return dim_; }
  int num_vertices() const { return dim_ + 1; }
  const Vec& vertex(int i) const { return vertices_[i]; }
  std::span<const Vec> vertices() const { return {vertices_.data(), static_cast<std::size_t>(dim_ + 1)}; }

  double volume() const { return static_cast<double>(volume_); }
  Real volume_ext() const { return volume_; }
  double diameter() const { return diameter_; }

  /// Face opposite local vertex i.
  double face_measure(int i) const { return static_cast<double>(face_measure_[i]); }
  const Vec& outward_normal(int i) const { return normals_[i]; }
  /// l_{T,F} = d! |T| / |F|, which is (d-1)! times the vertex-to-face distance.
  double height(int i) const { return static_cast<double>(height_[i]); }
  /// Euclidean distance from vertex i to the hyperplane of the opposite face.
  double height_by_distance(int i) const;
  std::vector<int> face_local_vertices(int i) const;

  Vec grad_lambda(int i) const;
  Bary barycentric(const Vec& x) const;
  /// Physical point for barycentric coordinates (length d+1).
  Vec point(const Bary& bary) const;
  /// x - v_i for the point with the given barycentric coordinates, in
  /// extended precision.
  Vec offset(int i, const Bary& bary) const;
  /// (v_k - v_i) . n_j from the face distances; exact up to one rounding.
  double edge_normal_component(int k, int i, int j) const;

 private:
  int dim_;
  std::array<Vec, 4> vertices_;
  std::array<VecL, 4> vertices_ext_;
  Real volume_ = 0;
  double diameter_ = 0;
  MatL bary_map_;  // (d+1)x(d+1) inverse of [1 ... 1; v_0 ... v_d]
  std::array<Real, 4> face_measure_{};
  std::array<Real, 4> height_{};
  std::array<Real, 4> distance_{};  // d |T| / |F|
  std::array<Vec, 4> normals_;
  std::array<VecL, 4> normals_ext_;
};

/// d-dimensional measure of a simplex given by d+1 points.
Real simplex_measure(std::span<const Vec> points);
/// (k)-dimensional measure of a k-simplex embedded in R^d (Gram determinant).
Real subsimplex_measure(std::span<const Vec> points);

enum class FaceKind { Interior, Boundary };

struct Face {
  std::array<int, 3> vertices{-1, -1, -1};  // sorted global indices, dim entries
  FaceKind kind = FaceKind::Boundary;
  int plus = -1;   // T+ (larger element index) or the single boundary owner
  int minus = -1;  // T- or -1 on the boundary
  int plus_local = -1;   // local index of the vertex of T+ opposite the face
  int minus_local = -1;
  Vec normal;      // from T+ toward T-, outward on the boundary
  double measure = 0;

  bool interior() const { return kind == FaceKind::Interior; }
};

struct FaceSet {
  int dim = 0;
  std::vector<Face> faces;
  /// cell_faces[e][i] = face opposite local vertex i of element e.
  std::vector<std::array<int, 4>> cell_faces;

  int size() const { return static_cast<int>(faces.size()); }
  int num_interior() const;
  int num_boundary() const { return size() - num_interior(); }
  /// +1 when n_F is the outward normal of element e, -1 otherwise.
  double orientation(int e, int local_face) const {
    return faces[cell_faces[e][local_face]].plus == e ? 1.0 : -1.0;
  }
};

/// Enumerates faces in element order; deterministic for identical input.
FaceSet build_faces(const SimplicialMesh& mesh);

/// Throws MeshError(Nonconforming) on faces shared by more than two
/// elements, on elements overlapping across a shared face, and on
/// vertices lying on a boundary face (hanging nodes).
void check_conformity(const SimplicialMesh& mesh);

struct Measures {
  std::vector<double> cells;
  std::vector<double> faces;
};
Measures measures(const SimplicialMesh& mesh, const FaceSet& faces);

/// l_{T,F} for the face of element `cell` with the given vertex set.
/// Throws PreconditionError when the vertices are not a face of the element.
double face_height(const SimplicialMesh& mesh, int cell, std::span<const int> face_vertices);

/// Mesh with its face topology and per-element simplices.
struct Triangulation {
  SimplicialMesh mesh;
  FaceSet faces;
  std::vector<Simplex> cells;

  int dim() const { return mesh.dim(); }
  int num_cells() const { return mesh.num_cells(); }
  int num_faces() const { return faces.size(); }
  const Simplex& cell(int e) const { return cells[e]; }
  const Face& face(int f) const { return faces.faces[f]; }
  double mesh_size() const;

  static std::shared_ptr<const Triangulation> create(SimplicialMesh mesh);
};

}  // namespace aniso
