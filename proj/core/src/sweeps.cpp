#include "aniso/sweeps.hpp"

#include "aniso/meshgen.hpp"
#include "aniso/norms.hpp"
#include "aniso/quadrature.hpp"
#include "aniso/rt_interp.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace aniso {

namespace {

FamilyMember needle_member(double eps, int n) {
  std::ostringstream spec;
  spec.precision(17);
  spec << "needle_2d:" << eps << ":" << n;
  return gen_family(spec.str()).front();
}

}  // namespace

std::vector<ProjectionRow> projection_sweep(const std::vector<double>& eps, double q, double p, int n) {
  std::vector<ProjectionRow> rows;
  const SmoothScalar v = sin_cos_2d();
  for (double e : eps) {
    auto m = needle_member(e, n);
    ProjectionRow row{e, m.aspect, 0};
    for (int c = 0; c < m.mesh.num_cells(); ++c) {
      auto pts = m.mesh.cell_vertices(c);
      Simplex T(pts);
      row.ratio = std::max(row.ratio, projection_error_ratio(T, decompose(pts, m.mesh.cell(c)), v, p, q));
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<RtRow> rt_sweep(const std::vector<double>& eps, double p, int n) {
  std::vector<RtRow> rows;
  const SmoothVector stab = sin_cos_field_2d(), err = mixed_field_2d();
  for (double e : eps) {
    auto m = needle_member(e, n);
    RtRow row{e, m.gamma_max, 0, 0};
    auto tri = Triangulation::create(m.mesh);
    row.stability_ratio = rt_stability_ratio(tri, stab, p);
    for (int c = 0; c < tri->num_cells(); ++c) {
      auto pts = tri->mesh.cell_vertices(c);
      row.error_ratio =
          std::max(row.error_ratio, rt_error_ratio(tri->cell(c), decompose(pts, tri->mesh.cell(c)), err, p));
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<TraceRow> trace_sweep(const std::vector<double>& eps, double p, int n) {
  std::vector<TraceRow> rows;
  const SmoothScalar v = sin_sum_2d();
  for (double e : eps) {
    SimplicialMesh mesh = needle_2d(e, n);
    TraceRow row{e, 0};
    for (int c = 0; c < mesh.num_cells(); ++c) {
      Simplex T(mesh.cell_vertices(c));
      for (int f = 0; f <= T.dim(); ++f) row.ratio = std::max(row.ratio, trace_ratio(T, f, v, p));
    }
    rows.push_back(row);
  }
  return rows;
}

IdentityReport identity_suite(const std::vector<std::string>& family_specs, int random_configs,
                              std::uint64_t seed) {
  IdentityReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1), w01(0, 1);
  for (int k = 0; k < random_configs; ++k) {
    const int d = 2 + k % 2;
    Vec n = Vec::Zero(d), vp(d), vm(d);
    for (int i = 0; i < d; ++i) {
      n(i) = u(rng);
      vp(i) = u(rng);
      vm(i) = u(rng);
    }
    n.normalize();
    double wp = w01(rng);
    bool interior = k % 5 != 0;
    double r = jump_product_defect(n, wp, 1 - wp, vp, vm, u(rng), u(rng), interior);
    rep.jump_product = std::max(rep.jump_product, std::abs(r));
  }
  for (const auto& spec : family_specs)
    for (auto& member : gen_family(spec)) {
      auto tri = Triangulation::create(std::move(member.mesh));
      const int d = tri->dim();
      auto rt = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::RT0));
      auto dc1 = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::DC1));
      FaceWeights w = build_face_weights(*tri, 2);
      rep.ibp = std::max(rep.ibp, ibp_forms(*rt, *dc1, w).max_relative_residual());

      // Random piecewise-linear traces through the mesh faces.
      FeFunction tau(rt), psi(dc1);
      for (auto& c : tau.coeffs()) c = u(rng);
      for (auto& c : psi.coeffs()) c = u(rng);
      PiecewiseVector pv = [&](int e, const Bary& b) { return tau.vector_value(e, b); };
      PiecewiseScalar ps = [&](int e, const Bary& b) { return psi.value(e, b); };
      for (int f = 0; f < tri->num_faces(); ++f) {
        const Face& F = tri->face(f);
        const Bary c = Bary::Constant(d + 1, 1.0 / (d + 1));
        double scale = tau.vector_value(F.plus, c).norm() * std::abs(psi.value(F.plus, c));
        if (F.interior()) scale += tau.vector_value(F.minus, c).norm() * std::abs(psi.value(F.minus, c));
        if (scale > 0)
          rep.jump_product_mesh = std::max(rep.jump_product_mesh, jump_product_residual(*tri, f, w, pv, ps) / scale);
      }

      SmoothVector cubic = random_polynomial_field(d, 3, rng());
      auto cr = commuting_residual(tri, cubic, 3);
      if (cr.div_max > 0) rep.commuting = std::max(rep.commuting, cr.residual / cr.div_max);

      for (int e = 0; e < tri->num_cells(); ++e) {
        const Simplex& T = tri->cell(e);
        for (int i = 0; i <= d; ++i) {
          for (int j = 0; j <= d; ++j) {
            double chi = apply_cr_dof_local(T, i, [&](const Bary& b) { return eval_cr_basis(T, j, b); }, 2);
            rep.cr_duality = std::max(rep.cr_duality, std::abs(chi - (i == j)));
            double flux = 0;
            for (const auto& pt : local_face_points(T, j, 2)) flux += pt.w * rt_basis_normal(T, i, pt.bary, j);
            rep.rt_duality = std::max(rep.rt_duality, std::abs(flux - (i == j)));
          }
        }
        // v = a + b x is an RT0 field; compare at the cell quadrature points.
        Vec a(d), c0 = T.vertex(0);
        for (int i = 0; i < d; ++i) a(i) = u(rng);
        double b = u(rng);
        VectorField v = [a, b, c0](const Vec& x) -> Vec { return a + b * (x - c0); };
        Bary fl = rt_local_fluxes(T, v, 2);
        double worst = 0, vmax = 0;
        for (const auto& pt : cell_points(T, 2)) {
          Vec exact = a + b * T.offset(0, pt.bary);
          worst = std::max(worst, (rt_local_value(T, fl, pt.bary) - exact).cwiseAbs().maxCoeff());
          vmax = std::max(vmax, exact.cwiseAbs().maxCoeff());
        }
        rep.rt_reproduction = std::max(rep.rt_reproduction, worst / vmax);
      }
    }
  return rep;
}

}  // namespace aniso
