#pragma once

#include "aniso/fe_spaces.hpp"
#include "aniso/norms.hpp"

namespace aniso {

/// a_h(u, v) = int grad_h u . grad_h v + sum_F kappa_F int_F Pi_F^0 [[u]] Pi_F^0 [[v]]
/// with kappa_F = kappa_{2,F*}, and load int f v.
struct PoissonSystem {
  std::shared_ptr<const DofMap> dofs;
  FaceWeights weights;
  SparseMatrix matrix;
  Eigen::VectorXd load;
  ScalarField f;
  int load_degree = 6;

  /// |u|_E = a_h(u, u)^{1/2}, accumulated in long double.
  double energy_norm(const Eigen::VectorXd& u) const;
};

/// space must be CR0 (strong Dirichlet) or DCCR (boundary-jump penalty).
PoissonSystem assemble_poisson(std::shared_ptr<const Triangulation> tri, SpaceTag space, ScalarField f,
                               int load_degree = 6);

struct StabilityRecord {
  double energy = 0;     // |u_h|_E
  double f_l2 = 0;       // ||f||_{L^2}
  double u_l2 = 0;       // ||u_h||_{L^2}
  double work = 0;       // int f u_h
  double energy_over_f = 0;
  double u_over_energy = 0;
  double residual = 0;   // ||D^{-1/2}(A u - b)|| / ||D^{-1/2} b||, D = diag(A)
  bool zero_solution = false;
};

struct PoissonSolution {
  FeFunction u;
  StabilityRecord record;
};

/// Sparse LDLT of the Jacobi-scaled matrix plus iterative refinement
/// against the assembled one. Throws SolverError on breakdown or when the
/// relative residual of the scaled system exceeds 1e-10.
PoissonSolution solve_poisson(const PoissonSystem& system);

}  // namespace aniso
