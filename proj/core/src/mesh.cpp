#include "aniso/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace aniso {

namespace {

constexpr double kDegenerate = 1e-300;

Real factorial(int d) {
  Real f = 1;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

VecL to_ext(const Vec& v) { return v.cast<Real>(); }

/// Normal of the hyperplane through the face points scaled by (d-1)! |F|.
/// In 3D the cross product is taken at the vertex opposite the longest
/// face edge, which keeps cap-shaped faces accurate.
VecL face_cross(std::span<const VecL> pts, int dim) {
  VecL n(dim);
  if (dim == 2) {
    VecL t = pts[1] - pts[0];
    n << t(1), -t(0);
    return n;
  }
  int apex = 0;
  Real longest = -1;
  for (int k = 0; k < 3; ++k) {
    Real l = (pts[(k + 1) % 3] - pts[(k + 2) % 3]).norm();
    if (l > longest) {
      longest = l;
      apex = k;
    }
  }
  Eigen::Matrix<Real, 3, 1> a = (pts[(apex + 1) % 3] - pts[apex]).head<3>();
  Eigen::Matrix<Real, 3, 1> b = (pts[(apex + 2) % 3] - pts[apex]).head<3>();
  n = a.cross(b);
  return n;
}

VecL face_normal(std::span<const VecL> pts, int dim) {
  VecL n = face_cross(pts, dim);
  return n / n.norm();
}

struct FaceKeyHash {
  std::size_t operator()(const std::array<int, 3>& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : k) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::array<int, 3> face_key(std::span<const int> cell, int skip, int dim) {
  std::array<int, 3> key{-1, -1, -1};
  int n = 0;
  for (int i = 0; i <= dim; ++i)
    if (i != skip) key[n++] = cell[i];
  std::sort(key.begin(), key.begin() + dim);
  return key;
}

std::string describe(const std::array<int, 3>& key, int dim) {
  std::ostringstream s;
  s << "(";
  for (int i = 0; i < dim; ++i) s << (i ? " " : "") << key[i];
  s << ")";
  return s.str();
}

/// True if x lies on the closed (d-1)-simplex spanned by pts, up to a
/// tolerance relative to the face diameter.
bool point_on_face(const Vec& x, std::span<const VecL> pts, int dim) {
  constexpr Real tol = 1e-10L;
  Real diam = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) diam = std::max(diam, (pts[i] - pts[j]).norm());
  VecL p = to_ext(x);
  VecL n = face_normal(pts, dim);
  if (std::abs((p - pts[0]).dot(n)) > tol * diam) return false;
  if (dim == 2) {
    VecL t = pts[1] - pts[0];
    Real s = (p - pts[0]).dot(t) / t.squaredNorm();
    return s >= -tol && s <= 1 + tol;
  }
  VecL a = pts[1] - pts[0], b = pts[2] - pts[0], r = p - pts[0];
  Real g11 = a.dot(a), g12 = a.dot(b), g22 = b.dot(b);
  Real det = g11 * g22 - g12 * g12;
  Real u = (g22 * r.dot(a) - g12 * r.dot(b)) / det;
  Real v = (g11 * r.dot(b) - g12 * r.dot(a)) / det;
  return u >= -tol && v >= -tol && u + v <= 1 + tol;
}

void check_hanging_nodes(const SimplicialMesh& mesh, const FaceSet& fs) {
  const int d = mesh.dim();
  std::vector<int> verts;
  for (const Face& f : fs.faces)
    if (!f.interior())
      for (int i = 0; i < d; ++i) verts.push_back(f.vertices[i]);
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());

  // Lexicographic order, then groups of equal x for two-level range queries.
  auto lex = [&](int a, int b) {
    const Vec& pa = mesh.vertex(a);
    const Vec& pb = mesh.vertex(b);
    for (int k = 0; k < d; ++k)
      if (pa(k) != pb(k)) return pa(k) < pb(k);
    return a < b;
  };
  std::sort(verts.begin(), verts.end(), lex);
  std::vector<std::pair<double, std::pair<int, int>>> groups;
  for (int i = 0; i < static_cast<int>(verts.size());) {
    int j = i;
    double x = mesh.vertex(verts[i])(0);
    while (j < static_cast<int>(verts.size()) && mesh.vertex(verts[j])(0) == x) ++j;
    groups.push_back({x, {i, j}});
    i = j;
  }

  std::array<VecL, 3> pts;
  for (const Face& f : fs.faces) {
    if (f.interior()) continue;
    Vec lo = mesh.vertex(f.vertices[0]), hi = lo;
    for (int i = 0; i < d; ++i) {
      pts[i] = to_ext(mesh.vertex(f.vertices[i]));
      lo = lo.cwiseMin(mesh.vertex(f.vertices[i]));
      hi = hi.cwiseMax(mesh.vertex(f.vertices[i]));
    }
    double pad = 1e-10 * (hi - lo).norm();
    lo.array() -= pad;
    hi.array() += pad;
    auto g0 = std::lower_bound(groups.begin(), groups.end(), lo(0),
                               [](const auto& g, double v) { return g.first < v; });
    for (auto g = g0; g != groups.end() && g->first <= hi(0); ++g) {
      auto first = verts.begin() + g->second.first;
      auto last = verts.begin() + g->second.second;
      first = std::lower_bound(first, last, lo(1),
                               [&](int v, double y) { return mesh.vertex(v)(1) < y; });
      for (auto it = first; it != last && mesh.vertex(*it)(1) <= hi(1); ++it) {
        int v = *it;
        if (std::find(f.vertices.begin(), f.vertices.begin() + d, v) != f.vertices.begin() + d) continue;
        const Vec& x = mesh.vertex(v);
        if (d == 3 && (x(2) < lo(2) || x(2) > hi(2))) continue;
        if (point_on_face(x, {pts.data(), static_cast<std::size_t>(d)}, d))
          throw MeshError(MeshError::Kind::Nonconforming,
                          "vertex " + std::to_string(v) + " lies on boundary face " +
                              describe(f.vertices, d) + " (hanging node)");
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SimplicialMesh::SimplicialMesh(int dim, std::vector<Vec> vertices, std::vector<Cell> cells)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cells)) {
  if (dim_ != 2 && dim_ != 3) throw Error("unsupported dimension " + std::to_string(dim_));
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].size() != dim_) throw Error("vertex " + std::to_string(i) + " has wrong dimension");
  const int nv = num_vertices();
  for (int e = 0; e < num_cells(); ++e) {
    auto c = cell(e);
    for (int v : c)
      if (v < 0 || v >= nv)
        throw MeshError(MeshError::Kind::IndexOutOfRange,
                        "element " + std::to_string(e) + " references vertex " + std::to_string(v) +
                            " of " + std::to_string(nv));
    for (int i = 0; i <= dim_; ++i)
      for (int j = i + 1; j <= dim_; ++j)
        if (c[i] == c[j])
          throw MeshError(MeshError::Kind::RepeatedVertex,
                          "element " + std::to_string(e) + " repeats vertex " + std::to_string(c[i]));
    auto pts = cell_vertices(e);
    if (simplex_measure(pts) < kDegenerate)
      throw MeshError(MeshError::Kind::Degenerate, "element " + std::to_string(e) + " has zero measure");
  }
  check_conformity(*this);
}

std::vector<Vec> SimplicialMesh::cell_vertices(int e) const {
  std::vector<Vec> pts;
  pts.reserve(dim_ + 1);
  for (int v : cell(e)) pts.push_back(vertices_[v]);
  return pts;
}

// ---------------------------------------------------------------------------

namespace {

struct LineReader {
  std::istringstream in;
  int line_no = 0;

  explicit LineReader(std::string_view text) : in(std::string(text)) {}

  /// Next non-empty line with comments stripped; false at end of input.
  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
      auto first = raw.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      out = raw.substr(first);
      return true;
    }
    return false;
  }

  std::string require(const char* what) {
    std::string s;
    if (!next(s)) throw ParseError(line_no, std::string("unexpected end of input, expected ") + what);
    return s;
  }

  long header(const char* keyword) {
    std::istringstream ls(require(keyword));
    std::string kw;
    long n = -1;
    if (!(ls >> kw) || kw != keyword) throw ParseError(line_no, std::string("expected '") + keyword + " <n>'");
    if (!(ls >> n) || n < 0) throw ParseError(line_no, std::string("malformed '") + keyword + "' header");
    std::string extra;
    if (ls >> extra) throw ParseError(line_no, "trailing tokens after header");
    return n;
  }
};

template <typename T>
std::vector<T> read_row(LineReader& r, int count, const char* what) {
  std::istringstream ls(r.require(what));
  std::vector<T> row(count);
  for (int i = 0; i < count; ++i)
    if (!(ls >> row[i])) throw ParseError(r.line_no, std::string("expected ") + std::to_string(count) + " values in " + what + " line");
  std::string extra;
  if (ls >> extra) throw ParseError(r.line_no, std::string("too many values in ") + what + " line");
  return row;
}

}  // namespace

SimplicialMesh parse_mesh(std::string_view text) {
  LineReader r(text);
  long dim = r.header("dim");
  if (dim != 2 && dim != 3) throw ParseError(r.line_no, "dim must be 2 or 3");
  long nv = r.header("vertices");
  std::vector<Vec> vertices;
  vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    auto row = read_row<double>(r, static_cast<int>(dim), "vertex");
    vertices.push_back(Eigen::Map<Vec>(row.data(), dim));
  }
  long ne = r.header("elements");
  std::vector<Cell> cells;
  cells.reserve(ne);
  for (long e = 0; e < ne; ++e) {
    auto row = read_row<long>(r, static_cast<int>(dim + 1), "element");
    Cell c{-1, -1, -1, -1};
    for (int i = 0; i <= dim; ++i) {
      if (row[i] < 0 || row[i] >= nv)
        throw MeshError(MeshError::Kind::IndexOutOfRange,
                        "element " + std::to_string(e) + " references vertex " + std::to_string(row[i]) +
                            " of " + std::to_string(nv));
      c[i] = static_cast<int>(row[i]);
    }
    cells.push_back(c);
  }
  std::string extra;
  if (r.next(extra)) throw ParseError(r.line_no, "unexpected content after element block");
  return SimplicialMesh(static_cast<int>(dim), std::move(vertices), std::move(cells));
}

SimplicialMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mesh(buf.str());
}

std::string format_mesh(const SimplicialMesh& mesh) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "dim " << mesh.dim() << "\n";
  out << "vertices " << mesh.num_vertices() << "\n";
  for (const Vec& v : mesh.vertices()) {
    for (int k = 0; k < mesh.dim(); ++k) out << (k ? " " : "") << v(k);
    out << "\n";
  }
  out << "elements " << mesh.num_cells() << "\n";
  for (int e = 0; e < mesh.num_cells(); ++e) {
    auto c = mesh.cell(e);
    for (int i = 0; i <= mesh.dim(); ++i) out << (i ? " " : "") << c[i];
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

Real simplex_measure(std::span<const Vec> points) {
  const int d = static_cast<int>(points.size()) - 1;
  MatL e(d, d);
  for (int j = 0; j < d; ++j) e.col(j) = (points[j + 1] - points[0]).cast<Real>();
  return std::abs(e.determinant()) / factorial(d);
}

Real subsimplex_measure(std::span<const Vec> points) {
  const int k = static_cast<int>(points.size()) - 1;
  if (k == 0) return 1;
  const int n = static_cast<int>(points[0].size());
  if (k == 1 || (k == 2 && n == 3)) {
    std::array<VecL, 3> pts;
    for (int i = 0; i <= k; ++i) pts[i] = points[i].cast<Real>();
    Real c = face_cross({pts.data(), static_cast<std::size_t>(k + 1)}, k + 1).norm();
    return k == 1 ? c : c / 2;
  }
  MatL e(n, k);
  for (int j = 0; j < k; ++j) e.col(j) = (points[j + 1] - points[0]).cast<Real>();
  MatL g = e.transpose() * e;
  return std::sqrt(std::max<Real>(g.determinant(), 0)) / factorial(k);
}

Simplex::Simplex(std::span<const Vec> vertices) : dim_(static_cast<int>(vertices.size()) - 1) {
  if (dim_ != 2 && dim_ != 3) throw GeometryError("simplex must have 3 or 4 vertices");
  for (int i = 0; i <= dim_; ++i) {
    vertices_[i] = vertices[i];
    vertices_ext_[i] = to_ext(vertices[i]);
  }
  volume_ = simplex_measure(vertices);
  if (volume_ < kDegenerate) throw GeometryError("degenerate simplex");
  for (int i = 0; i <= dim_; ++i)
    for (int j = i + 1; j <= dim_; ++j)
      diameter_ = std::max(diameter_, static_cast<double>((vertices_ext_[i] - vertices_ext_[j]).norm()));

  const Real dfact = factorial(dim_);
  for (int i = 0; i <= dim_; ++i) {
    std::array<VecL, 3> fp;
    int n = 0;
    for (int j = 0; j <= dim_; ++j)
      if (j != i) fp[n++] = vertices_ext_[j];
    VecL cr = face_cross({fp.data(), static_cast<std::size_t>(dim_)}, dim_);
    Real crn = cr.norm();
    VecL nrm = cr / crn;
    if ((vertices_ext_[i] - fp[0]).dot(nrm) > 0) nrm = -nrm;
    normals_ext_[i] = nrm;
    normals_[i] = nrm.cast<double>();
    face_measure_[i] = dim_ == 2 ? crn : crn / 2;
    height_[i] = dfact * volume_ / face_measure_[i];
    distance_[i] = dim_ * volume_ / face_measure_[i];
  }
}

double Simplex::height_by_distance(int i) const {
  // |det[v_i - q, face edges from q]| / ((d-1)! |F|) with q a face vertex.
  auto face = face_local_vertices(i);
  const VecL& q = vertices_ext_[face[0]];
  MatL m(dim_, dim_);
  m.col(0) = vertices_ext_[i] - q;
  for (int k = 1; k < dim_; ++k) m.col(k) = vertices_ext_[face[k]] - q;
  return static_cast<double>(std::abs(m.determinant()) / (face_measure_[i] * factorial(dim_ - 1)));
}

std::vector<int> Simplex::face_local_vertices(int i) const {
  std::vector<int> out;
  for (int j = 0; j <= dim_; ++j)
    if (j != i) out.push_back(j);
  return out;
}

Vec Simplex::grad_lambda(int i) const { return (-normals_ext_[i] / distance_[i]).cast<double>(); }

Bary Simplex::barycentric(const Vec& x) const {
  VecL p = to_ext(x);
  Bary lambda(dim_ + 1);
  for (int i = 0; i <= dim_; ++i) {
    const VecL& q = vertices_ext_[i == 0 ? 1 : 0];
    lambda(i) = static_cast<double>(-(p - q).dot(normals_ext_[i]) / distance_[i]);
  }
  return lambda;
}

Vec Simplex::point(const Bary& bary) const {
  VecL x = VecL::Zero(dim_);
  for (int i = 0; i <= dim_; ++i) x += static_cast<Real>(bary(i)) * vertices_ext_[i];
  return x.cast<double>();
}

Vec Simplex::offset(int i, const Bary& bary) const {
  VecL x = VecL::Zero(dim_);
  for (int k = 0; k <= dim_; ++k)
    if (k != i) x += static_cast<Real>(bary(k)) * (vertices_ext_[k] - vertices_ext_[i]);
  return x.cast<double>();
}

double Simplex::edge_normal_component(int k, int i, int j) const {
  // every vertex but j lies on face j, and v_j sits at distance d|T|/|F_j| behind it
  return static_cast<double>(distance_[j] * ((i == j ? 1 : 0) - (k == j ? 1 : 0)));
}

// ---------------------------------------------------------------------------

int FaceSet::num_interior() const {
  return static_cast<int>(std::count_if(faces.begin(), faces.end(), [](const Face& f) { return f.interior(); }));
}

FaceSet build_faces(const SimplicialMesh& mesh) {
  const int d = mesh.dim();
  FaceSet fs;
  fs.dim = d;
  fs.cell_faces.assign(mesh.num_cells(), {-1, -1, -1, -1});
  std::unordered_map<std::array<int, 3>, int, FaceKeyHash> index;
  index.reserve(static_cast<std::size_t>(mesh.num_cells()) * (d + 1));

  for (int e = 0; e < mesh.num_cells(); ++e) {
    auto c = mesh.cell(e);
    for (int i = 0; i <= d; ++i) {
      auto key = face_key(c, i, d);
      auto [it, inserted] = index.try_emplace(key, fs.size());
      if (inserted) {
        Face f;
        f.vertices = key;
        f.plus = e;
        f.plus_local = i;
        fs.faces.push_back(f);
      } else {
        Face& f = fs.faces[it->second];
        if (f.interior())
          throw MeshError(MeshError::Kind::Nonconforming,
                          "face " + describe(key, d) + " shared by more than two elements");
        // Elements are visited in increasing order, so e is the larger index.
        f.kind = FaceKind::Interior;
        f.minus = f.plus;
        f.minus_local = f.plus_local;
        f.plus = e;
        f.plus_local = i;
      }
      fs.cell_faces[e][i] = it->second;
    }
  }

  std::vector<Vec> pts;
  for (Face& f : fs.faces) {
    pts.clear();
    for (int i = 0; i < d; ++i) pts.push_back(mesh.vertex(f.vertices[i]));
    f.measure = static_cast<double>(subsimplex_measure(pts));

    std::array<VecL, 3> fp;
    for (int i = 0; i < d; ++i) fp[i] = to_ext(pts[i]);
    VecL n = face_normal({fp.data(), static_cast<std::size_t>(d)}, d);
    VecL opp = to_ext(mesh.vertex(mesh.cell(f.plus)[f.plus_local]));
    Real side = (opp - fp[0]).dot(n);
    if (side > 0) n = -n;
    if (f.interior()) {
      VecL other = to_ext(mesh.vertex(mesh.cell(f.minus)[f.minus_local]));
      if ((other - fp[0]).dot(n) <= 0)
        throw MeshError(MeshError::Kind::Nonconforming,
                        "elements " + std::to_string(f.minus) + " and " + std::to_string(f.plus) +
                            " overlap across face " + describe(f.vertices, d));
    }
    f.normal = n.cast<double>();
  }
  return fs;
}

void check_conformity(const SimplicialMesh& mesh) {
  FaceSet fs = build_faces(mesh);
  check_hanging_nodes(mesh, fs);
}

Measures measures(const SimplicialMesh& mesh, const FaceSet& faces) {
  Measures m;
  m.cells.reserve(mesh.num_cells());
  for (int e = 0; e < mesh.num_cells(); ++e)
    m.cells.push_back(static_cast<double>(simplex_measure(mesh.cell_vertices(e))));
  m.faces.reserve(faces.size());
  for (const Face& f : faces.faces) m.faces.push_back(f.measure);
  return m;
}

double face_height(const SimplicialMesh& mesh, int cell, std::span<const int> face_vertices) {
  const int d = mesh.dim();
  if (cell < 0 || cell >= mesh.num_cells()) throw PreconditionError("element index out of range");
  if (static_cast<int>(face_vertices.size()) != d) throw PreconditionError("a face has d vertices");
  auto c = mesh.cell(cell);
  int opposite = -1;
  int found = 0;
  for (int i = 0; i <= d; ++i) {
    if (std::find(face_vertices.begin(), face_vertices.end(), c[i]) != face_vertices.end())
      ++found;
    else
      opposite = i;
  }
  if (found != d || opposite < 0) throw PreconditionError("vertices do not form a face of the element");
  Simplex s(mesh.cell_vertices(cell));
  return s.height(opposite);
}

double Triangulation::mesh_size() const {
  double h = 0;
  for (const Simplex& s : cells) h = std::max(h, s.diameter());
  return h;
}

std::shared_ptr<const Triangulation> Triangulation::create(SimplicialMesh mesh) {
  auto t = std::make_shared<Triangulation>(Triangulation{std::move(mesh), {}, {}});
  t->faces = build_faces(t->mesh);
  t->cells.reserve(t->mesh.num_cells());
  for (int e = 0; e < t->mesh.num_cells(); ++e) t->cells.emplace_back(t->mesh.cell_vertices(e));
  return t;
}

}  // namespace aniso
