#include "aniso/sobolev.hpp"

#include "aniso/meshgen.hpp"
#include "aniso/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

namespace aniso {

namespace {

/// A = L D L^T (sparse) or L L^T (dense), applied as a solve.
class SpdSolver {
 public:
  SpdSolver(const SparseMatrix& a, int dense_limit) {
    const int n = static_cast<int>(a.rows());
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0;
    if (n < dense_limit) {
      dense_.compute(Eigen::MatrixXd(a));
      if (dense_.info() != Eigen::Success) throw SolverError("matrix is not positive definite");
      Eigen::VectorXd l = dense_.matrixLLT().diagonal();
      for (int i = 0; i < n; ++i) {
        dmin = std::min(dmin, l(i) * l(i));
        dmax = std::max(dmax, l(i) * l(i));
      }
      use_dense_ = true;
    } else {
      sparse_.compute(a);
      if (sparse_.info() != Eigen::Success) throw SolverError("sparse factorization failed");
      const auto& d = sparse_.vectorD();
      for (int i = 0; i < n; ++i) {
        dmin = std::min(dmin, d(i));
        dmax = std::max(dmax, d(i));
      }
    }
    if (!(dmin > 1e-12 * dmax)) throw SolverError("matrix is numerically singular (pivot ratio below 1e-12)");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    return use_dense_ ? Eigen::VectorXd(dense_.solve(b)) : Eigen::VectorXd(sparse_.solve(b));
  }

 private:
  bool use_dense_ = false;
  Eigen::LLT<Eigen::MatrixXd> dense_;
  Eigen::SimplicialLDLT<SparseMatrix> sparse_;
};

bool is_cr_family(SpaceTag t) { return t == SpaceTag::DCCR || t == SpaceTag::CR || t == SpaceTag::CR0; }

int lq_degree(double q) {
  const bool even = q == std::floor(q) && static_cast<int>(q) % 2 == 0 && q <= kMaxQuadDegree;
  return even ? static_cast<int>(q) : 6;
}

/// Linear maps from coefficients to the quantities entering the norms.
struct NormOperators {
  SparseMatrix values;     // quadrature-point values
  Eigen::VectorXd value_w;
  SparseMatrix gradients;  // d rows per element
  Eigen::VectorXd cell_w;  // |T| per element
  SparseMatrix jumps;      // Pi_F^0 [[.]] per face
  Eigen::VectorXd face_w;  // kappa_F |F|
  int dim = 2;
};

NormOperators norm_operators(const DofMap& dofs, const FaceWeights& w, int degree) {
  const Triangulation& tri = *dofs.tri;
  const int d = tri.dim(), ne = tri.num_cells();
  NormOperators op;
  op.dim = d;
  std::vector<Eigen::Triplet<double>> tv, tg, tj;
  std::vector<double> vw;
  int row = 0;
  op.cell_w.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const Simplex& T = tri.cell(e);
    op.cell_w(e) = T.volume();
    auto g = local_gradients(dofs.tag, T);
    for (const auto& p : cell_points(T, degree)) {
      Bary v = local_values(dofs.tag, T, p.bary);
      for (int i = 0; i < dofs.local_size; ++i)
        if (dofs.cell_dofs[e][i] >= 0) tv.emplace_back(row, dofs.cell_dofs[e][i], v(i));
      vw.push_back(p.w);
      ++row;
    }
    for (int i = 0; i < dofs.local_size; ++i)
      if (dofs.cell_dofs[e][i] >= 0)
        for (int k = 0; k < d; ++k) tg.emplace_back(e * d + k, dofs.cell_dofs[e][i], g[i](k));
  }
  op.values.resize(row, dofs.n_dofs);
  op.values.setFromTriplets(tv.begin(), tv.end());
  op.value_w = Eigen::Map<Eigen::VectorXd>(vw.data(), static_cast<Eigen::Index>(vw.size()));
  op.gradients.resize(ne * d, dofs.n_dofs);
  op.gradients.setFromTriplets(tg.begin(), tg.end());
  op.face_w.resize(tri.num_faces());
  for (int f = 0; f < tri.num_faces(); ++f) {
    for (const auto& [g, c] : face_jump_coefficients(dofs, f)) tj.emplace_back(f, g, c);
    op.face_w(f) = w.kappa[f] * tri.face(f).measure;
  }
  op.jumps.resize(tri.num_faces(), dofs.n_dofs);
  op.jumps.setFromTriplets(tj.begin(), tj.end());
  return op;
}

/// |y|^{r-2} y with the r < 2 singularity at 0 removed.
double power_grad(double y, double r) {
  double a = std::abs(y);
  return a == 0 ? 0.0 : std::pow(a, r - 1) * (y > 0 ? 1.0 : -1.0);
}

struct Objective {
  const NormOperators& op;
  double q, p;

  /// Returns (log R, gradient of log R).
  std::pair<double, Eigen::VectorXd> eval(const Eigen::VectorXd& x, bool with_grad) const {
    Eigen::VectorXd v = op.values * x, g = op.gradients * x, j = op.jumps * x;
    double sq = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k) sq += op.value_w(k) * std::pow(std::abs(v(k)), q);
    double sp = 0;
    const int d = op.dim;
    Eigen::VectorXd cell_norm(op.cell_w.size());
    for (Eigen::Index e = 0; e < op.cell_w.size(); ++e) {
      cell_norm(e) = g.segment(e * d, d).norm();
      sp += op.cell_w(e) * std::pow(cell_norm(e), p);
    }
    for (Eigen::Index f = 0; f < j.size(); ++f) sp += op.face_w(f) * std::pow(std::abs(j(f)), p);
    double obj = std::log(sq) / q - std::log(sp) / p;
    Eigen::VectorXd grad;
    if (with_grad) {
      Eigen::VectorXd dv(v.size()), dg(g.size()), dj(j.size());
      for (Eigen::Index k = 0; k < v.size(); ++k) dv(k) = op.value_w(k) * power_grad(v(k), q);
      for (Eigen::Index e = 0; e < op.cell_w.size(); ++e) {
        double n = cell_norm(e);
        double s = n == 0 ? 0.0 : op.cell_w(e) * std::pow(n, p - 2);
        dg.segment(e * d, d) = s * g.segment(e * d, d);
      }
      for (Eigen::Index f = 0; f < j.size(); ++f) dj(f) = op.face_w(f) * power_grad(j(f), p);
      grad = (op.values.transpose() * dv) / sq -
             (op.gradients.transpose() * dg + op.jumps.transpose() * dj) / sp;
    }
    return {obj, grad};
  }
};

}  // namespace

EigenResult largest_generalized_eigenpair(const SparseMatrix& m, const SparseMatrix& a, double tolerance,
                                          int dense_limit, std::uint64_t seed) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) throw PreconditionError("largest_generalized_eigenpair: empty system");
  Eigen::VectorXd s = a.diagonal().cwiseSqrt().cwiseInverse();
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(s(i))) throw SolverError("matrix has a non-positive diagonal entry");
  SparseMatrix as = s.asDiagonal() * a * s.asDiagonal();
  SparseMatrix ms = s.asDiagonal() * m * s.asDiagonal();
  SpdSolver solver(as, dense_limit);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd start(n);
  for (int i = 0; i < n; ++i) start(i) = normal(rng);

  EigenResult out;
  const int max_steps = std::min(n, 80);
  for (int cycle = 0; cycle < 50; ++cycle) {
    std::vector<Eigen::VectorXd> qv;
    std::vector<Eigen::VectorXd> aq;  // A q_j
    std::vector<double> alpha, beta;
    Eigen::VectorXd q = start / std::sqrt(start.dot(as * start));
    bool converged = false;
    Eigen::VectorXd ritz;
    double theta = 0;
    for (int k = 0; k < max_steps; ++k) {
      qv.push_back(q);
      aq.push_back(as * q);
      Eigen::VectorXd mq = ms * q;
      Eigen::VectorXd w = solver.solve(mq);
      alpha.push_back(q.dot(mq));
      // Full reorthogonalization in the A inner product, applied twice.
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < qv.size(); ++i) w -= aq[i].dot(w) * qv[i];
      ++out.iterations;
      const int kk = static_cast<int>(alpha.size());
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(kk, kk);
      for (int i = 0; i < kk; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < kk) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      theta = es.eigenvalues()(kk - 1);
      Eigen::VectorXd y = es.eigenvectors().col(kk - 1);
      double b = std::sqrt(std::max(0.0, w.dot(as * w)));
      // |beta_k y_k| bounds the residual in the A^{-1}-norm up to scaling.
      bool exhausted = kk == n || b <= 1e-14 * std::abs(theta);
      if (std::abs(b * y(kk - 1)) <= 1e-3 * tolerance * std::abs(theta) || exhausted || kk == max_steps) {
        ritz = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < kk; ++i) ritz += y(i) * qv[i];
        Eigen::VectorXd x = s.asDiagonal() * ritz;
        Eigen::VectorXd mx = ms * ritz;
        double res = (mx - theta * (as * ritz)).norm() / mx.norm();
        out.lambda = theta;
        out.x = x;
        out.residual = res;
        if (res <= tolerance || exhausted) {
          converged = true;
          break;
        }
        if (kk == max_steps) break;
      }
      beta.push_back(b);
      q = w / b;
    }
    if (converged) return out;
    start = ritz;
  }
  std::ostringstream msg;
  msg << "generalized eigensolver did not reach residual " << tolerance << " (last " << out.residual << ")";
  throw SolverError(msg.str());
}

SobolevL2 sobolev_constant_l2(std::shared_ptr<const DofMap> dofs, const FaceWeights& weights) {
  if (!is_cr_family(dofs->tag))
    throw PreconditionError("sobolev_constant_l2: space must be DCCR, CR or CR0, got " + to_string(dofs->tag));
  if (weights.p != 2) throw PreconditionError("sobolev_constant_l2: weights must be built for p = 2");
  SparseMatrix m = mass_matrix(*dofs), a = energy_matrix(*dofs, weights);
  EigenResult r;
  try {
    r = largest_generalized_eigenpair(m, a);
  } catch (const SolverError& e) {
    throw SolverError("sobolev_constant_l2 on " + to_string(dofs->tag) + ": " + e.what());
  }
  Eigen::VectorXd x = r.x / std::sqrt(r.x.dot(m * r.x));
  return SobolevL2{std::sqrt(r.lambda), r.lambda, r.iterations, r.residual, FeFunction(dofs, x)};
}

double sobolev_quotient(const FeFunction& phi, const FaceWeights& weights, double q) {
  double den = vh_norm(phi, weights);
  double num = lq_norm(phi, q, lq_degree(q));
  if (den == 0) {
    if (num == 0) throw UndefinedRatio("sobolev_quotient: zero function");
    throw UndefinedRatio("sobolev_quotient: |.|_{p,V_h} vanishes on a nonzero function");
  }
  return num / den;
}

void check_sobolev_pair(int dim, double q, double p) {
  if (!(q > 1 && p > 1 && std::isfinite(q) && std::isfinite(p)))
    throw PreconditionError("Sobolev pair requires 1 < q, p < inf");
  if (1.0 - dim / p < -dim / q - 1e-14)
    throw PreconditionError("(q, p) = (" + std::to_string(q) + ", " + std::to_string(p) +
                            ") violates 1 - d/p >= -d/q");
  if (q > p)
    throw PreconditionError("q > p: the discrete inequality is not available for q = " + std::to_string(q) +
                            " > p = " + std::to_string(p));
}

AscentResult sobolev_constant_lq_lp(std::shared_ptr<const DofMap> dofs, const FaceWeights& weights, double q,
                                    const AscentOptions& options) {
  if (!is_cr_family(dofs->tag))
    throw PreconditionError("sobolev_constant_lq_lp: space must be DCCR, CR or CR0, got " + to_string(dofs->tag));
  const double p = weights.p;
  check_sobolev_pair(dofs->dim(), q, p);
  const Triangulation& tri = *dofs->tri;
  NormOperators op = norm_operators(*dofs, weights, lq_degree(q));
  Objective obj{op, q, p};
  FaceWeights w2 = weights.p == 2 ? weights : build_face_weights(tri, 2);
  SparseMatrix a2 = energy_matrix(*dofs, w2);
  SpdSolver precond(a2, 2000);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  AscentResult out{0, FeFunction(dofs), {}, 0};
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd x(dofs->n_dofs);
    for (auto& v : x) v = normal(rng);
    x /= std::sqrt(x.dot(a2 * x));
    auto [f, g] = obj.eval(x, true);
    std::vector<double> hist{std::exp(f)};
    for (int it = 0; it < options.max_iterations; ++it) {
      ++out.iterations;
      Eigen::VectorXd dir = precond.solve(g);
      bool accepted = false;
      for (double t = 1.0; t > 1e-12; t /= 2) {
        Eigen::VectorXd y = x + t * dir;
        double fy = obj.eval(y, false).first;
        if (fy > f) {
          x = y / std::sqrt(y.dot(a2 * y));
          std::tie(f, g) = obj.eval(x, true);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      hist.push_back(std::exp(f));
      const int k = static_cast<int>(hist.size());
      if (k > options.window &&
          hist[k - 1] - hist[k - 1 - options.window] <= options.tolerance * hist[k - 1])
        break;
    }
    if (f > best) {
      best = f;
      out.best = FeFunction(dofs, x);
    }
    out.history.push_back(std::move(hist));
  }
  out.constant = std::exp(best);
  return out;
}

double SweepReport::max_over_min() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.constant);
    hi = std::max(hi, r.constant);
  }
  return rows.empty() ? 1.0 : hi / lo;
}

void SweepReport::write_csv(std::ostream& os) const {
  os << "family,label,param,h,aspect,gamma_max,space,q,p,constant,iterations,residual\n";
  os << std::setprecision(12);
  for (const auto& r : rows)
    os << r.family << ",\"" << r.label << "\"," << r.param << ',' << r.h << ',' << r.aspect << ',' << r.gamma_max
       << ',' << r.space << ',' << r.q << ',' << r.p << ',' << r.constant << ',' << r.iterations << ','
       << r.residual << '\n';
}

SweepReport sweep_family(std::string_view family_spec, double q, double p, SpaceTag space,
                         const AscentOptions& options) {
  SweepReport report;
  for (auto& member : gen_family(family_spec)) {
    auto tri = Triangulation::create(std::move(member.mesh));
    auto dofs = std::make_shared<const DofMap>(build_dofs(tri, space));
    FaceWeights w = build_face_weights(*tri, p);
    SweepRow row{member.family, member.label, member.param, member.h, member.aspect, member.gamma_max,
                 to_string(space), q, p};
    if (q == 2 && p == 2) {
      auto r = sobolev_constant_l2(dofs, w);
      row.constant = r.constant;
      row.iterations = r.iterations;
      row.residual = r.residual;
    } else {
      auto r = sobolev_constant_lq_lp(dofs, w, q, options);
      row.constant = r.constant;
      row.iterations = r.iterations;
      double rel = 0;
      for (const auto& h : r.history) {
        const int k = static_cast<int>(h.size());
        const int back = std::min(k - 1, options.window);
        rel = std::max(rel, (h[k - 1] - h[k - 1 - back]) / h[k - 1]);
      }
      row.residual = rel;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

double p0_dual_ratio(const std::shared_ptr<const Triangulation>& tri, int e, double q, double p) {
  auto dofs = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::P0));
  FeFunction psi(dofs);
  psi.coeffs()(e) = 1;
  const double pd = p / (p - 1), qd = q / (q - 1);
  return lq_norm(psi, pd, 1) / lq_norm(psi, qd, 1);
}

NegativeControl negative_control(double q, double p, const std::vector<int>& n_list) {
  NegativeControl out;
  out.expected = 2 * (1 / q - 1 / p);
  for (int n : n_list) {
    auto tri = Triangulation::create(aniso_grid_2d(n, n));
    out.h.push_back(1.0 / n);
    out.ratio.push_back(p0_dual_ratio(tri, 0, q, p));
  }
  const int k = static_cast<int>(out.h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < k; ++i) {
    double x = std::log(out.h[i]), y = std::log(out.ratio[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return out;
}

}  // namespace aniso
