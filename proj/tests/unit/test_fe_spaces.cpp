#include "oracles.hpp"

#include <aniso/fe_spaces.hpp>
#include <aniso/geometry.hpp>
#include <aniso/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace aniso;

namespace {

std::shared_ptr<const DofMap> dofs_on(const SimplicialMesh& mesh, SpaceTag tag) {
  return std::make_shared<const DofMap>(build_dofs(Triangulation::create(mesh), tag));
}

Bary random_bary(std::mt19937_64& rng, int d) {
  std::exponential_distribution<double> ex(1.0);
  Bary b(d + 1);
  for (int i = 0; i <= d; ++i) b(i) = ex(rng);
  return b / b.sum();
}

Eigen::VectorXd random_coeffs(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = u(rng);
  return c;
}

// Outward unit normal of the face opposite vertex m, computed from the points.
Vec outward(const std::vector<Vec>& pts, int m) {
  const int d = static_cast<int>(pts.size()) - 1;
  std::vector<Vec> f;
  for (int k = 0; k <= d; ++k)
    if (k != m) f.push_back(pts[k]);
  Vec n(d);
  if (d == 2) {
    Vec e = f[1] - f[0];
    n << -e(1), e(0);
  } else {
    Eigen::Vector3d a = f[1] - f[0], b = f[2] - f[0];
    n = a.cross(b);
  }
  n.normalize();
  if (n.dot(pts[m] - f[0]) > 0) n = -n;
  return n;
}

// Flux of v through the face opposite vertex m; exact for quadratic v . n.
double face_flux(const std::vector<Vec>& pts, int m, const VectorField& v) {
  const int d = static_cast<int>(pts.size()) - 1;
  std::vector<Vec> f;
  for (int k = 0; k <= d; ++k)
    if (k != m) f.push_back(pts[k]);
  Vec n = outward(pts, m);
  if (d == 2) {
    double len = (f[1] - f[0]).norm();
    Vec mid = (f[0] + f[1]) / 2;
    return len * (v(f[0]).dot(n) + 4 * v(mid).dot(n) + v(f[1]).dot(n)) / 6;
  }
  Eigen::Vector3d a = f[1] - f[0], b = f[2] - f[0];
  double area = a.cross(b).norm() / 2;
  double acc = 0;
  for (int i = 0; i < 3; ++i) acc += v((f[i] + f[(i + 1) % 3]) / 2).dot(n);
  return area * acc / 3;
}

}  // namespace

TEST(CrBasis, ReferenceExamples) {
  auto tri = Triangulation::create(oracle::reference_triangle());
  const Simplex& T = tri->cell(0);
  Vec centroid{{1.0 / 3, 1.0 / 3}};
  EXPECT_NEAR(eval_cr_basis(T, 1, centroid), 1.0 / 3, 1e-15);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(eval_cr_basis(T, i, T.vertex(i)), -1.0, 1e-15);
    Vec on_face = (T.vertex((i + 1) % 3) + T.vertex((i + 2) % 3)) / 2;
    EXPECT_NEAR(eval_cr_basis(T, i, on_face), 1.0, 1e-15);
  }
  auto tet = Triangulation::create(oracle::reference_tet());
  EXPECT_NEAR(eval_cr_basis(tet->cell(0), 2, tet->cell(0).vertex(2)), -2.0, 1e-15);
}

TEST(CrDof, Examples) {
  auto tri = Triangulation::create(oracle::reference_triangle());
  const Simplex& T = tri->cell(0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(apply_cr_dof(T, i, [](const Vec&) { return 1.0; }), 1.0, 1e-15);
  // the hypotenuse is opposite the vertex at the origin
  int hyp = -1;
  for (int i = 0; i < 3; ++i)
    if (T.vertex(i).norm() == 0) hyp = i;
  ASSERT_GE(hyp, 0);
  EXPECT_NEAR(apply_cr_dof(T, hyp, [](const Vec& x) { return x(0); }), 0.5, 1e-15);
}

TEST(CrDof, DualityOnRandomSimplices) {
  std::mt19937_64 rng(101);
  double worst = 0;
  for (int d : {2, 3})
    for (int k = 0; k < 100; ++k) {
      auto pts = oracle::random_simplex(rng, d, 1e6);
      Simplex T(pts);
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) {
          double chi = apply_cr_dof_local(T, i, [&](const Bary& l) { return eval_cr_basis(T, j, l); }, 2);
          worst = std::max(worst, std::abs(chi - (i == j ? 1.0 : 0.0)));
        }
    }
  EXPECT_LE(worst, 1e-12);
}

TEST(RtBasis, DualityOnRandomSimplices) {
  std::mt19937_64 rng(202);
  double worst = 0;
  for (int d : {2, 3})
    for (int k = 0; k < 100; ++k) {
      auto pts = oracle::random_simplex(rng, d, 1e6);
      Simplex T(pts);
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) {
          double flux = 0;
          for (const auto& p : local_face_points(T, j, 2)) flux += p.w * rt_basis_normal(T, i, p.bary, j);
          worst = std::max(worst, std::abs(flux - (i == j ? 1.0 : 0.0)));
        }
    }
  EXPECT_LE(worst, 1e-12);
}

TEST(RtBasis, DivergenceAndSign) {
  auto tri = Triangulation::create(oracle::reference_triangle());
  const Simplex& T = tri->cell(0);
  EXPECT_NEAR(rt_basis_divergence(T), 2.0, 1e-15);
  EXPECT_NEAR(rt_basis_divergence(T, -1), -2.0, 1e-15);
  // (x - p_i) / (d |T|) has divergence d / (d |T|)
  Vec x{{0.2, 0.3}};
  const double h = 0.25;
  for (int i = 0; i < 3; ++i) {
    double div = 0;
    for (int k = 0; k < 2; ++k) {
      Vec e = Vec::Zero(2);
      e(k) = h;
      div += (eval_rt_basis(T, i, Vec(x + e))(k) - eval_rt_basis(T, i, Vec(x - e))(k)) / (2 * h);
    }
    EXPECT_NEAR(div, rt_basis_divergence(T), 1e-13);
  }
}

TEST(RtBasis, ConstantsReproduced) {
  std::mt19937_64 rng(303);
  for (int d : {2, 3}) {
    auto pts = oracle::random_simplex(rng, d, 100);
    Simplex T(pts);
    Vec c = Vec::Zero(d);
    c(0) = 1;
    Bary flux(d + 1);
    for (int j = 0; j <= d; ++j) flux(j) = apply_rt_dof(T, j, [&](const Vec&) { return c; });
    for (int k = 0; k < 5; ++k) {
      Bary l = random_bary(rng, d);
      Vec v = Vec::Zero(d);
      for (int i = 0; i <= d; ++i) v += eval_rt_basis(T, i, l, flux(i));
      EXPECT_LE((v - c).norm(), 1e-12);
    }
  }
}

TEST(DofMap, CountsOnTwoTriangleSquare) {
  auto tri = Triangulation::create(oracle::unit_square_two_triangles());
  EXPECT_EQ(build_dofs(tri, SpaceTag::DCCR).n_dofs, 6);
  EXPECT_EQ(build_dofs(tri, SpaceTag::CR).n_dofs, 5);
  EXPECT_EQ(build_dofs(tri, SpaceTag::CR0).n_dofs, 1);
  EXPECT_EQ(build_dofs(tri, SpaceTag::RT0).n_dofs, 5);
  EXPECT_EQ(build_dofs(tri, SpaceTag::P0).n_dofs, 2);
  EXPECT_EQ(build_dofs(tri, SpaceTag::DC1).n_dofs, 6);
  EXPECT_EQ(build_dofs(tri, SpaceTag::CR0).constrained_faces.size(), 4u);
}

TEST(DofMap, ParseSpace) {
  EXPECT_EQ(parse_space("cr0"), SpaceTag::CR0);
  EXPECT_EQ(parse_space("DCCR"), SpaceTag::DCCR);
  EXPECT_EQ(parse_space("Rt0"), SpaceTag::RT0);
  EXPECT_THROW(parse_space("p2"), Error);
  for (auto t : {SpaceTag::DCCR, SpaceTag::CR, SpaceTag::CR0, SpaceTag::RT0, SpaceTag::P0, SpaceTag::DC1})
    EXPECT_EQ(parse_space(to_string(t)), t);
}

TEST(FeFunction, LengthMismatchThrows) {
  auto dofs = dofs_on(oracle::unit_square_two_triangles(), SpaceTag::CR);
  EXPECT_THROW(FeFunction(dofs, Eigen::VectorXd::Zero(4)), PreconditionError);
}

TEST(CrBasis, PartitionOfUnity) {
  std::mt19937_64 rng(404);
  for (int d : {2, 3})
    for (int k = 0; k < 50; ++k) {
      Simplex T(oracle::random_simplex(rng, d, 1e4));
      Bary l = random_bary(rng, d);
      double s = 0;
      for (int i = 0; i <= d; ++i) s += eval_cr_basis(T, i, l);
      EXPECT_NEAR(s, 1.0, 1e-13);
    }
}

TEST(CrSpaces, InclusionChain) {
  std::mt19937_64 rng(505);
  for (const auto& mesh : {oracle::grid_2d(3, 5, 1.0, 0.01), oracle::kuhn_cube()}) {
    auto tri = Triangulation::create(mesh);
    auto cr0 = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::CR0));
    auto cr = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::CR));
    auto dccr = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::DCCR));
    FeFunction f0(cr0, random_coeffs(rng, cr0->n_dofs));
    FeFunction f1 = embed(f0, cr);
    FeFunction f2 = embed(f1, dccr);
    for (int e = 0; e < tri->num_cells(); ++e) {
      Bary l = random_bary(rng, tri->dim());
      EXPECT_NEAR(f1.value(e, l), f0.value(e, l), 1e-13);
      EXPECT_NEAR(f2.value(e, l), f0.value(e, l), 1e-13);
    }
    EXPECT_THROW(embed(f2, cr), PreconditionError);
  }
}

TEST(CrSpaces, InterpolationReproducesAffine) {
  auto tri = Triangulation::create(oracle::grid_2d(4, 4, 1.0, 0.001));
  auto cr = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::CR));
  auto f = interpolate(cr, [](const Vec& x) { return 2 * x(0) - 3 * x(1) + 0.5; });
  for (int e = 0; e < tri->num_cells(); ++e) {
    Vec x = tri->cell(e).point(Bary::Constant(3, 1.0 / 3));
    EXPECT_NEAR(f.value(e, Bary::Constant(3, 1.0 / 3)), 2 * x(0) - 3 * x(1) + 0.5, 1e-12);
    EXPECT_NEAR(f.gradient(e)(0), 2, 1e-9);
    EXPECT_NEAR(f.gradient(e)(1), -3, 1e-9);
  }
}

TEST(Rt0, NormalContinuityAcrossFaces) {
  std::mt19937_64 rng(606);
  for (const auto& mesh : {oracle::grid_2d(4, 6, 1.0, 1e-3), oracle::kuhn_cube()}) {
    auto tri = Triangulation::create(mesh);
    auto rt = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::RT0));
    FeFunction v(rt, random_coeffs(rng, rt->n_dofs));
    double worst = 0;
    for (int f = 0; f < tri->num_faces(); ++f) {
      const Face& F = tri->face(f);
      if (!F.interior()) continue;
      for (const auto& p : face_points(*tri, f, 4)) {
        double a = v.normal_component(F.plus, face_point_bary(tri->mesh, F.plus, F, p.mu), F.plus_local);
        double b = v.normal_component(F.minus, face_point_bary(tri->mesh, F.minus, F, p.mu), F.minus_local);
        worst = std::max(worst, std::abs(a + b) / (std::abs(a) + std::abs(b) + 1e-300));
      }
    }
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(Piola, ZeroMapsToZero) {
  std::vector<Vec> pts = {Vec{{0.1, 0.2}}, Vec{{1.3, 0.4}}, Vec{{0.5, 0.9}}};
  auto v = piola_push(decompose(pts), [](const Vec&) { return Vec(Vec::Zero(2)); });
  EXPECT_EQ(v(Vec{{0.4, 0.4}}).norm(), 0.0);
}

TEST(Piola, FluxPreservedUpToOrientation) {
  std::mt19937_64 rng(707);
  for (int d : {2, 3})
    for (int k = 0; k < 40; ++k) {
      auto pts = oracle::random_simplex(rng, d, 1e3);
      ElementGeometry geo = decompose(pts);
      auto ref = geo.reference_vertices();
      const double sign = geo.A().determinant() > 0 ? 1.0 : -1.0;
      VectorField v_hat = [d](const Vec& x) {
        Vec out(d);
        for (int i = 0; i < d; ++i) out(i) = 0.3 + x(i) * x((i + 1) % d) - 0.7 * x(i) + x((i + 1) % d);
        return out;
      };
      VectorField v = piola_push(geo, v_hat);
      for (int kr = 0; kr <= d; ++kr) {
        Vec image = geo.map(ref[kr]);
        int m = 0;
        for (int i = 1; i <= d; ++i)
          if ((pts[i] - image).norm() < (pts[m] - image).norm()) m = i;
        ASSERT_LE((pts[m] - image).norm(), 1e-12 * geo.h_T);
        double phys = face_flux(pts, m, v);
        double refl = face_flux(ref, kr, v_hat);
        EXPECT_NEAR(phys, sign * refl, 1e-12 * std::max(1.0, std::abs(refl)));
      }
    }
}

TEST(Piola, DivergenceScaling) {
  std::mt19937_64 rng(808);
  for (int d : {2, 3})
    for (int k = 0; k < 20; ++k) {
      auto pts = oracle::random_simplex(rng, d, 10);
      ElementGeometry geo = decompose(pts);
      // div v^ = 1 + 2 x^_0
      VectorField v_hat = [d](const Vec& x) {
        Vec out = Vec::Zero(d);
        out(0) = x(0) + x(0) * x(0) - x(1) * x(1);
        out(1) = 0.5 * x(0) * x(1) - 0.5 * x(0) * x(1);
        return out;
      };
      VectorField v = piola_push(geo, v_hat);
      const double det = geo.A().determinant();
      Simplex T(pts);
      Vec x = T.point(random_bary(rng, d));
      // central differences are exact for quadratics; a step of order h_T keeps rounding small
      const double h = geo.h_T;
      double div = 0;
      for (int c = 0; c < d; ++c) {
        Vec e = Vec::Zero(d);
        e(c) = h;
        div += (v(Vec(x + e))(c) - v(Vec(x - e))(c)) / (2 * h);
      }
      Vec xh = geo.inverse_map(x);
      double expected = (1 + 2 * xh(0)) / det;
      EXPECT_NEAR(div, expected, 1e-12 * std::abs(expected));
    }
}
