#pragma once

#include "aniso/fe_spaces.hpp"
#include "aniso/norms.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace aniso {

/// Generalized eigenpair M x = lambda A x with the largest lambda, A symmetric
/// positive definite.
struct EigenResult {
  double lambda = 0;
  Eigen::VectorXd x;
  int iterations = 0;
  /// ||M x - lambda A x|| / ||M x|| in the diagonally scaled basis
  /// x = D^{-1/2} y, D = diag(A).
  double residual = 0;
};

/// Lanczos iteration on A^{-1} M in the A inner product after symmetric
/// diagonal scaling. A is factored once: dense LLT below `dense_limit`
/// unknowns, sparse LDLT otherwise. Throws SolverError when A is not
/// numerically positive definite (pivot ratio below 1e-12).
EigenResult largest_generalized_eigenpair(const SparseMatrix& m, const SparseMatrix& a, double tolerance = 1e-9,
                                          int dense_limit = 2000, std::uint64_t seed = 7);

struct SobolevL2 {
  double constant = 0;  // sqrt(lambda_max)
  double lambda = 0;
  int iterations = 0;
  double residual = 0;
  FeFunction extremal;  // normalized to ||.||_{L^2} = 1
};

/// sup ||phi||_{L^2} / |phi|_{2,V_h} over a DCCR, CR or CR0 space.
/// `weights` must be built for p = 2.
SobolevL2 sobolev_constant_l2(std::shared_ptr<const DofMap> dofs, const FaceWeights& weights);

/// ||phi||_{L^q} / |phi|_{p,V_h} with p = weights.p.
double sobolev_quotient(const FeFunction& phi, const FaceWeights& weights, double q);

struct AscentOptions {
  int restarts = 8;
  std::uint64_t seed = 1;
  int max_iterations = 2000;
  double tolerance = 1e-8;  // relative objective change over `window` steps
  int window = 5;
};

struct AscentResult {
  double constant = 0;  // best quotient found: a lower bound of the supremum
  FeFunction best;
  std::vector<std::vector<double>> history;  // objective per accepted step, per restart
  int iterations = 0;
};

/// Maximizes ||phi||_{L^q} / |phi|_{p,V_h} by gradient ascent preconditioned
/// with the p = 2 Gram matrix, backtracking from step 1.0, over seeded
/// random restarts. Throws PreconditionError unless 1 < q <= p < inf and
/// 1 - d/p >= -d/q.
AscentResult sobolev_constant_lq_lp(std::shared_ptr<const DofMap> dofs, const FaceWeights& weights, double q,
                                    const AscentOptions& options = {});

/// Rejects pairs the discrete inequality does not cover.
void check_sobolev_pair(int dim, double q, double p);

struct SweepRow {
  std::string family;
  std::string label;
  double param = 0;
  double h = 0;
  double aspect = 0;
  double gamma_max = 0;
  std::string space;
  double q = 2, p = 2;
  double constant = 0;
  int iterations = 0;
  double residual = 0;  // eigen-residual, or final relative objective change for the ascent
};

struct SweepReport {
  std::vector<SweepRow> rows;

  double max_over_min() const;
  void write_csv(std::ostream& os) const;
};

/// One row per family member. q = p = 2 uses the eigensolver; other pairs
/// report the ascent lower bound.
SweepReport sweep_family(std::string_view family_spec, double q, double p, SpaceTag space,
                         const AscentOptions& options = {});

/// ||psi||_{L^{p'}} / ||psi||_{L^{q'}} for the P0 indicator of element e.
double p0_dual_ratio(const std::shared_ptr<const Triangulation>& tri, int e, double q, double p);

struct NegativeControl {
  std::vector<double> h, ratio;
  double slope = 0;     // least-squares slope of log ratio against log h
  double expected = 0;  // d (1/q - 1/p)
};
/// Indicator of the first element on isotropic n x n grids of the unit square.
NegativeControl negative_control(double q, double p, const std::vector<int>& n_list);

}  // namespace aniso
