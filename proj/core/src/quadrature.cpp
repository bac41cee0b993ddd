#include "aniso/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace aniso {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    long double w = 2 / ((1 - x * x) * dp * dp);
    nodes[n - 1 - i] = static_cast<double>((1 + x) / 2);
    weights[n - 1 - i] = static_cast<double>(w / 2);
  }
}

namespace {

/// Collapsed rule on the reference k-simplex, k in {1,2,3}.
QuadRule collapsed_rule(int k, int degree) {
  QuadRule r;
  r.degree = degree;
  if (degree <= 1) {
    r.bary.push_back(Bary::Constant(k + 1, 1.0 / (k + 1)));
    double w = 1;
    for (int i = 2; i <= k; ++i) w /= i;
    r.weights.push_back(w);
    return r;
  }
  // Direction j carries the Jacobian factor (1-u_j)^{k-1-j}.
  std::array<std::vector<double>, 3> u, w;
  for (int j = 0; j < k; ++j) {
    int n = (degree + (k - 1 - j)) / 2 + 1;
    gauss_legendre(n, u[j], w[j]);
  }
  auto emit = [&](const std::array<double, 3>& t, double weight) {
    Bary b(k + 1);
    double rest = 1;
    for (int j = 0; j < k; ++j) {
      b(j + 1) = t[j] * rest;
      rest *= 1 - t[j];
    }
    b(0) = rest;
    r.bary.push_back(b);
    r.weights.push_back(weight);
  };
  if (k == 1) {
    for (std::size_t a = 0; a < u[0].size(); ++a) emit({u[0][a], 0, 0}, w[0][a]);
  } else if (k == 2) {
    for (std::size_t a = 0; a < u[0].size(); ++a)
      for (std::size_t b = 0; b < u[1].size(); ++b)
        emit({u[0][a], u[1][b], 0}, w[0][a] * w[1][b] * (1 - u[0][a]));
  } else {
    for (std::size_t a = 0; a < u[0].size(); ++a)
      for (std::size_t b = 0; b < u[1].size(); ++b)
        for (std::size_t c = 0; c < u[2].size(); ++c) {
          double jac = (1 - u[0][a]) * (1 - u[0][a]) * (1 - u[1][b]);
          emit({u[0][a], u[1][b], u[2][c]}, w[0][a] * w[1][b] * w[2][c] * jac);
        }
  }
  return r;
}

const QuadRule& cached(int d, int degree, QuadDomain domain) {
  if (d != 2 && d != 3) throw Error("quadrature: dimension must be 2 or 3");
  if (degree < 0 || degree > kMaxQuadDegree)
    throw Error("quadrature: unsupported degree " + std::to_string(degree) + " (max " +
                std::to_string(kMaxQuadDegree) + ")");
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, QuadRule> rules;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(d, degree, static_cast<int>(domain));
  auto it = rules.find(key);
  if (it == rules.end()) {
    QuadRule r = collapsed_rule(domain == QuadDomain::Simplex ? d : d - 1, degree);
    r.dim = d;
    r.domain = domain;
    it = rules.emplace(key, std::move(r)).first;
  }
  return it->second;
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

const QuadRule& simplex_rule(int d, int degree) { return cached(d, degree, QuadDomain::Simplex); }

const QuadRule& face_rule(int d, int degree) { return cached(d, degree, QuadDomain::Face); }

std::vector<CellPoint> cell_points(const Simplex& s, int degree) {
  const QuadRule& r = simplex_rule(s.dim(), degree);
  const double scale = factorial(s.dim()) * s.volume();
  std::vector<CellPoint> pts;
  pts.reserve(r.size());
  for (int q = 0; q < r.size(); ++q) pts.push_back({r.bary[q], s.point(r.bary[q]), r.weights[q] * scale});
  return pts;
}

std::vector<CellPoint> local_face_points(const Simplex& s, int face, int degree) {
  const int d = s.dim();
  const QuadRule& r = face_rule(d, degree);
  const double scale = factorial(d - 1) * s.face_measure(face);
  auto local = s.face_local_vertices(face);
  std::vector<CellPoint> pts;
  pts.reserve(r.size());
  for (int q = 0; q < r.size(); ++q) {
    Bary b = Bary::Zero(d + 1);
    for (int k = 0; k < d; ++k) b(local[k]) = r.bary[q](k);
    pts.push_back({b, s.point(b), r.weights[q] * scale});
  }
  return pts;
}

std::vector<FacePoint> face_points(const Triangulation& tri, int face, int degree) {
  const int d = tri.dim();
  const Face& f = tri.face(face);
  const QuadRule& r = face_rule(d, degree);
  const double scale = factorial(d - 1) * f.measure;
  std::vector<FacePoint> pts;
  pts.reserve(r.size());
  for (int q = 0; q < r.size(); ++q) {
    FacePoint p;
    VecL x = VecL::Zero(d);
    for (int k = 0; k < d; ++k) {
      p.mu[k] = r.bary[q](k);
      x += static_cast<Real>(p.mu[k]) * tri.mesh.vertex(f.vertices[k]).cast<Real>();
    }
    p.x = x.cast<double>();
    p.w = r.weights[q] * scale;
    pts.push_back(std::move(p));
  }
  return pts;
}

Bary face_point_bary(const SimplicialMesh& mesh, int e, const Face& face, const std::array<double, 3>& mu) {
  const int d = mesh.dim();
  auto c = mesh.cell(e);
  Bary b = Bary::Zero(d + 1);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i <= d; ++i)
      if (c[i] == face.vertices[k]) b(i) = mu[k];
  return b;
}

}  // namespace aniso
