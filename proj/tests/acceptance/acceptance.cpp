// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 on any failure.
#include "oracles.hpp"

#include <aniso/fe_spaces.hpp>
#include <aniso/fields.hpp>
#include <aniso/geometry.hpp>
#include <aniso/meshgen.hpp>
#include <aniso/norms.hpp>
#include <aniso/poisson.hpp>
#include <aniso/quadrature.hpp>
#include <aniso/rt_interp.hpp>
#include <aniso/sobolev.hpp>
#include <aniso/sweeps.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace aniso;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

int failures = 0;

void run(int id, const std::string& name, const std::function<void(Verdict&)>& body) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.ok = false;
    v.detail << " exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.ok) ++failures;
  std::printf("[%s] %d %s:%s (%.1fs)\n", v.ok ? "PASS" : "FAIL", id, name.c_str(), v.detail.str().c_str(), secs);
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double max_over_min(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
}

int factorial(int d) { return d == 2 ? 2 : 6; }

const std::vector<double> kNeedleEps{1, 1e-1, 1e-2, 1e-3, 1e-4};

// Every mesh the suite generates.
const std::vector<std::string> kAllFamilies{
    "aniso_grid_2d:4:4,40,400", "aniso_grid_2d:4,8,16:x1,x10,x100", "needle_2d:1,0.1,0.01,0.001,0.0001",
    "lshape_2d:2,4,8,16",       "kuhn_3d:2:2:2,20",                "sliver_3d:0.5,0.1,0.01,0.001"};

Bary random_bary(std::mt19937_64& rng, int d) {
  std::exponential_distribution<double> ex(1.0);
  Bary b(d + 1);
  for (int i = 0; i <= d; ++i) b(i) = ex(rng);
  return b / b.sum();
}

// Long double: edge differences of thin faces far from the origin lose digits otherwise.
double face_area(const std::vector<Vec>& f) {
  using V3 = Eigen::Matrix<long double, 3, 1>;
  V3 a = V3::Zero(), b = V3::Zero();
  for (int k = 0; k < f[0].size(); ++k) {
    a(k) = static_cast<long double>(f[1](k)) - f[0](k);
    if (f.size() == 3) b(k) = static_cast<long double>(f[2](k)) - f[0](k);
  }
  return static_cast<double>(f.size() == 2 ? a.norm() : a.cross(b).norm() / 2);
}

double oracle_diameter(const std::vector<Vec>& pts) {
  double h = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) h = std::max(h, (pts[i] - pts[j]).norm());
  return h;
}

double svd_norm(const Mat& a) { return Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(a)).singularValues()(0); }

double svd_cond(const Mat& a) {
  auto s = Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(a)).singularValues();
  return s(0) / s(s.size() - 1);
}

void identities(Verdict& v) {
  auto r = identity_suite({"aniso_grid_2d:4:4,40,400", "kuhn_3d:2:2:2,20"}, 1000, 11);
  v.detail << " ibp=" << sci(r.ibp) << " jump_product=" << sci(r.jump_product)
           << " jump_product_mesh=" << sci(r.jump_product_mesh);
  v.check(r.ibp <= 1e-11, "ibp <= 1e-11");
  v.check(r.jump_product <= 1e-13, "jump_product <= 1e-13");
  v.check(r.jump_product_mesh <= 1e-13, "jump_product_mesh <= 1e-13");
}

void duality(Verdict& v) {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-1, 1);
  double cr = 0, rt = 0, repro = 0, repro_1e4 = 0;
  for (int k = 0; k < 1000; ++k) {
    const int d = k % 2 ? 3 : 2;
    auto pts = oracle::random_simplex(rng, d, 1e6);
    Simplex T(pts);
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) {
        const double delta = i == j ? 1.0 : 0.0;
        double chi = apply_cr_dof_local(T, i, [&](const Bary& l) { return eval_cr_basis(T, j, l); }, 2);
        cr = std::max(cr, std::abs(chi - delta));
        double flux = 0;
        for (const auto& p : local_face_points(T, j, 2)) flux += p.w * rt_basis_normal(T, i, p.bary, j);
        rt = std::max(rt, std::abs(flux - delta));
      }
    // a + b x, scaled so both parts are O(1) on T
    Vec a(d);
    for (int i = 0; i < d; ++i) a(i) = u(rng);
    const double b = u(rng) / T.diameter();
    VectorField field = [&](const Vec& x) { return Vec(a + b * x); };
    Bary c = rt_local_fluxes(T, field, 2);
    double vmax = 0, err = 0;
    for (int s = 0; s < 10; ++s) {
      Bary l = random_bary(rng, d);
      Vec exact = field(T.point(l));
      vmax = std::max(vmax, exact.lpNorm<Eigen::Infinity>());
      err = std::max(err, (rt_local_value(T, c, l) - exact).lpNorm<Eigen::Infinity>());
    }
    repro = std::max(repro, err / vmax);
    if (oracle::edge_aspect(pts) <= 1e4) repro_1e4 = std::max(repro_1e4, err / vmax);
  }
  v.detail << " cr_duality=" << sci(cr) << " rt_duality=" << sci(rt) << " rt_reproduction=" << sci(repro)
           << " (aspect<=1e4: " << sci(repro_1e4) << ")";
  v.check(cr <= 1e-12, "cr_duality <= 1e-12");
  v.check(rt <= 1e-12, "rt_duality <= 1e-12");
  v.check(repro <= 1e-10, "rt_reproduction <= 1e-10");
}

void commuting(Verdict& v) {
  double worst = 0, worst_bounded = 0;
  int meshes = 0;
  for (const auto& spec : kAllFamilies)
    for (const auto& m : gen_family(spec)) {
      auto tri = Triangulation::create(m.mesh);
      for (std::uint64_t seed : {1, 2}) {
        auto res = commuting_residual(tri, random_polynomial_field(m.mesh.dim(), 3, seed + 100 * meshes));
        worst = std::max(worst, res.residual / res.div_max);
        if (m.family != "sliver_3d") worst_bounded = std::max(worst_bounded, res.residual / res.div_max);
      }
      ++meshes;
    }
  v.detail << " meshes=" << meshes << " max residual/||div v||_inf=" << sci(worst)
           << " (without sliver_3d: " << sci(worst_bounded) << ")";
  v.check(worst <= 1e-10, "commuting <= 1e-10 ||div v||_inf");
}

void geometry(Verdict& v) {
  std::mt19937_64 rng(4004);
  double det = 0, norm_excess = -1e300, cond_excess = -1e300, vert = 0;
  int lib_fail = 0;
  for (int k = 0; k < 10000; ++k) {
    const int d = k % 2 ? 3 : 2;
    auto pts = oracle::random_simplex(rng, d, 1e6);
    ElementGeometry g = decompose(pts);
    if (!check_bounds(g, pts).pass()) ++lib_fail;
    const double vol = oracle::simplex_volume(pts);
    const double ref_vol = oracle::simplex_volume(g.reference_vertices());
    // factor by factor: the determinant of the product loses cond(A~ A^) digits
    const double det_v = std::abs(g.A_tilde.determinant() * g.A_hat.determinant());
    det = std::max(det, std::abs(det_v * ref_vol - vol) / vol);
    det = std::max(det, std::abs(std::abs(g.A_rot.determinant()) * det_v * ref_vol - vol) / vol);
    // d! |T| = |det A_V| for the unit reference simplex
    if (std::abs(ref_vol * factorial(d) - 1) < 1e-15)
      det = std::max(det, std::abs(det_v - factorial(d) * vol) / (factorial(d) * vol));
    const double h_T = oracle_diameter(pts);
    double prod = 1;
    for (int i = 0; i < d; ++i) prod *= g.h(i);
    const double H_T = prod / vol * h_T;
    norm_excess = std::max(norm_excess, svd_norm(g.A_tilde) - (d == 2 ? std::sqrt(2.0) : 2.0));
    cond_excess = std::max(cond_excess, svd_cond(g.A_tilde) - (d == 2 ? 1.0 : 2.0 / 3) * H_T / h_T);
    auto ref = g.reference_vertices();
    for (int i = 0; i <= d; ++i) vert = std::max(vert, (g.map(ref[i]) - pts[g.perm[i]]).norm() / h_T);
  }
  v.detail << " elements=10000 det_rel=" << sci(det) << " norm_excess=" << sci(norm_excess)
           << " cond_excess=" << sci(cond_excess) << " vertex/h_T=" << sci(vert) << " check_bounds_failures=" << lib_fail;
  v.check(det <= 1e-10, "det rel <= 1e-10");
  v.check(norm_excess <= 1e-10, "||A~|| bound + 1e-10");
  v.check(cond_excess <= 1e-8, "cond(A~) bound + 1e-8");
  v.check(vert <= 1e-10, "vertex reproduction <= 1e-10 h_T");
  v.check(lib_fail == 0, "check_bounds");
}

void trace(Verdict& v) {
  std::mt19937_64 rng(5005);
  double eq = 0;
  for (int k = 0; k < 200; ++k) {
    const int d = k % 2 ? 3 : 2;
    auto pts = oracle::random_simplex(rng, d, 1e6);
    Simplex T(pts);
    const double c = 0.5 + k % 7, p = 2 + k % 3;
    SmoothScalar cst{[c](const Vec&) { return c; }, [d](const Vec&) { return Vec(Vec::Zero(d)); }};
    const double vol = oracle::simplex_volume(pts);
    for (int f = 0; f <= d; ++f) {
      std::vector<Vec> face;
      for (int i = 0; i <= d; ++i)
        if (i != f) face.push_back(pts[i]);
      const double area = face_area(face);
      const double ell = factorial(d) * vol / area;
      double face_int = 0;
      for (const auto& q : local_face_points(T, f, 2)) face_int += q.w * std::pow(c, p);
      const double rhs = factorial(d) / ell * std::pow(c, p) * vol;
      eq = std::max(eq, std::abs(face_int - rhs) / rhs);
      const double expected = std::pow(factorial(d), 1 / p);
      eq = std::max(eq, std::abs(trace_ratio(T, f, cst, p) - expected) / expected);
    }
  }
  double sweep = 0;
  for (double p : {2.0, 3.0})
    for (const auto& r : trace_sweep(kNeedleEps, p)) sweep = std::max(sweep, r.ratio);
  v.detail << " constant rel=" << sci(eq) << " sweep max=" << sci(sweep);
  v.check(eq <= 1e-12, "constant equality rel 1e-12");
  v.check(sweep <= 2, "trace sweep max <= 2");
}

void projection(Verdict& v) {
  for (auto [q, p] : {std::pair{2.0, 2.0}, std::pair{4.0, 2.0}}) {
    std::vector<double> r;
    for (const auto& row : projection_sweep(kNeedleEps, q, p)) r.push_back(row.ratio);
    const double mm = max_over_min(r);
    v.detail << " (" << q << "," << p << ") max/min=" << sci(mm);
    v.check(mm <= 3, "max/min <= 3");
  }
}

void rt_sweeps(Verdict& v) {
  std::vector<double> stab, err;
  for (const auto& row : rt_sweep(kNeedleEps, 2)) {
    stab.push_back(row.stability_ratio);
    err.push_back(row.error_ratio);
  }
  v.detail << " stability max/min=" << sci(max_over_min(stab)) << " error max/min=" << sci(max_over_min(err));
  v.check(max_over_min(stab) <= 3, "stability max/min <= 3");
  v.check(max_over_min(err) <= 3, "error max/min <= 3");
}

// C_P per (space, family member), shared with criterion 10.
std::map<std::pair<std::string, std::string>, double> sobolev_constants;

void sobolev(Verdict& v) {
  const std::vector<std::string> families{"needle_2d:1,0.1,0.01,0.001", "aniso_grid_2d:4,8,16:x1,x10,x100",
                                          "lshape_2d:2,4,8,16"};
  double dense_err = 0, ascent_err = 0;
  int dense_checks = 0;
  for (SpaceTag tag : {SpaceTag::CR0, SpaceTag::CR, SpaceTag::DCCR})
    for (const auto& spec : families) {
      std::vector<double> constants;
      bool first = true;
      for (const auto& m : gen_family(spec)) {
        auto dofs = std::make_shared<const DofMap>(build_dofs(Triangulation::create(m.mesh), tag));
        auto w = build_face_weights(*dofs->tri, 2);
        auto r = sobolev_constant_l2(dofs, w);
        constants.push_back(r.constant);
        sobolev_constants[{to_string(tag), m.family + ":" + m.label}] = r.constant;
        if (dofs->n_dofs <= 2000) {
          auto ev = oracle::dense_generalized_eigenvalues(Eigen::MatrixXd(mass_matrix(*dofs)),
                                                          Eigen::MatrixXd(energy_matrix(*dofs, w)));
          const double ref = std::sqrt(*std::max_element(ev.begin(), ev.end()));
          dense_err = std::max(dense_err, std::abs(r.constant - ref) / ref);
          ++dense_checks;
        }
        if (first) {
          auto asc = sobolev_constant_lq_lp(dofs, w, 2);
          ascent_err = std::max(ascent_err, std::abs(asc.constant - r.constant) / r.constant);
          first = false;
        }
      }
      const double mm = max_over_min(constants);
      v.detail << " " << to_string(tag) << "/" << spec.substr(0, spec.find(':')) << "=" << sci(mm);
      v.check(mm <= 2, to_string(tag) + " " + spec + " max/min <= 2");
    }
  v.detail << " dense(" << dense_checks << ") rel=" << sci(dense_err) << " ascent rel=" << sci(ascent_err);
  v.check(dense_err <= 1e-8, "dense oracle 1e-8");
  v.check(ascent_err <= 1e-3, "ascent 1e-3");
}

void negative(Verdict& v) {
  const double q = 4, p = 2;
  const double expected = 2 * (1 / q - 1 / p);
  auto nc = negative_control(q, p, {4, 8, 16, 32});
  // least-squares slope recomputed from |T|^{1/q - 1/p}, |T| = h^2 / 2
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(nc.h.size());
  for (double h : nc.h) {
    double x = std::log(h), y = std::log(std::pow(h * h / 2, 1 / q - 1 / p));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double oracle_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  v.detail << " slope=" << sci(nc.slope) << " expected=" << sci(expected) << " closed form=" << sci(oracle_slope);
  v.check(std::abs(nc.slope - expected) <= 0.15, "slope within 0.15");
  v.check(std::abs(nc.slope - oracle_slope) <= 1e-10, "slope matches closed form");
}

void poisson(Verdict& v) {
  const ScalarField one = [](const Vec&) { return 1.0; };
  double energy = 0, poincare = -1e300;
  for (SpaceTag tag : {SpaceTag::CR0, SpaceTag::DCCR}) {
    std::vector<double> quotient;
    for (const auto& m : gen_family("needle_2d:1,0.1,0.01,0.001")) {
      auto tri = Triangulation::create(m.mesh);
      const double cp = sobolev_constants.count({to_string(tag), m.family + ":" + m.label})
                            ? sobolev_constants[{to_string(tag), m.family + ":" + m.label}]
                            : sobolev_constant_l2(std::make_shared<const DofMap>(build_dofs(tri, tag)),
                                                  build_face_weights(*tri, 2))
                                  .constant;
      for (const std::string f : {"one", "sinsin", "bump"}) {
        auto s = solve_poisson(assemble_poisson(tri, tag, builtin_scalar(f)));
        const auto& r = s.record;
        energy = std::max(energy, std::abs(r.energy * r.energy - r.work) / r.work);
        poincare = std::max(poincare, r.u_l2 - (cp * r.energy + 1e-9));
        if (f == "one") quotient.push_back(r.energy_over_f);
      }
    }
    const double mm = max_over_min(quotient);
    v.detail << " " << to_string(tag) << " quotient max/min=" << sci(mm);
    v.check(mm <= 2, "stability quotient max/min <= 2");
  }
  auto u_l2 = [&](int n) {
    return solve_poisson(assemble_poisson(Triangulation::create(aniso_grid_2d(n, n)), SpaceTag::CR0, one)).record.u_l2;
  };
  const double ref = u_l2(128);
  double drift = 0;
  for (int n : {16, 32, 64}) drift = std::max(drift, std::abs(u_l2(n) - ref) / ref);
  v.detail << " energy rel=" << sci(energy) << " poincare excess=" << sci(poincare) << " self-convergence=" << sci(drift);
  v.check(energy <= 1e-10, "energy identity rel 1e-10");
  v.check(poincare <= 0, "||u|| <= C_P |u|_E + 1e-9");
  v.check(drift <= 0.02, "self-convergence within 2%");
}

}  // namespace

int main() {
  run(1, "exact identities", identities);
  run(2, "duality and unisolvence", duality);
  run(3, "commuting diagram", commuting);
  run(4, "geometry certification", geometry);
  run(5, "trace equality and sweep", trace);
  run(6, "projection sweep", projection);
  run(7, "RT sweeps", rt_sweeps);
  run(8, "discrete Sobolev constant", sobolev);
  run(9, "q>p negative control", negative);
  run(10, "Poisson stability", poisson);
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
